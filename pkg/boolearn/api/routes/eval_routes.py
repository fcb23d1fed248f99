"""Circuit evaluation API routes."""

from fastapi import APIRouter, Body, Depends

from boolearn.controllers.evaluation_controller import EvaluationController
from boolearn.schemas.api import EvalRequest, EvalResponse

router = APIRouter(prefix="/api/eval", tags=["Evaluation"])


def get_evaluation_controller() -> EvaluationController:
    """Dependency to get EvaluationController instance."""
    return EvaluationController()


@router.post("/", response_model=EvalResponse)
def evaluate_circuit(
    request: EvalRequest = Body(...),
    controller: EvaluationController = Depends(get_evaluation_controller),
) -> EvalResponse:
    """Accuracy, size and depth of an AIGER circuit on a PLA care set."""
    return controller.evaluate_circuit(request)
