"""Portfolio learning API routes."""

from fastapi import APIRouter, Body, Depends

from boolearn.controllers.portfolio_controller import PortfolioController
from boolearn.schemas.api import LearnRequest, LearnResponse

router = APIRouter(prefix="/api/learn", tags=["Learning"])


def get_portfolio_controller() -> PortfolioController:
    """Dependency to get PortfolioController instance."""
    return PortfolioController()


@router.post("/", response_model=LearnResponse)
def learn(
    request: LearnRequest = Body(...),
    controller: PortfolioController = Depends(get_portfolio_controller),
) -> LearnResponse:
    """Train the configured portfolio and return the selected circuit."""
    return controller.learn(request)
