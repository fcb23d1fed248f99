"""AIGER ASCII (aag) reader and writer for single-output combinational AIGs."""

import io
from typing import TextIO, Union

from boolearn.core.errors import AigerFormatError
from boolearn.models.aig import Aig, lit_var


def write_aag(aig: Aig) -> str:
    """Serialize the output cone of ``aig`` as ``aag M I 0 1 A``."""
    compact = aig.compact()
    num_inputs = compact.num_inputs
    num_ands = compact.num_ands
    lines = [f"aag {num_inputs + num_ands} {num_inputs} 0 1 {num_ands}"]
    lines.extend(str(lit) for lit in compact.inputs())
    lines.append(str(compact.output))
    for offset in range(num_ands):
        var = num_inputs + 1 + offset
        f0, f1 = compact.fanins(var)
        lines.append(f"{2 * var} {f0} {f1}")
    return "\n".join(lines) + "\n"


def _ints(line: str, count: int, lineno: int) -> list[int]:
    parts = line.split()
    if len(parts) != count or not all(p.isdigit() for p in parts):
        raise AigerFormatError(f"line {lineno}: expected {count} unsigned integers, got '{line}'")
    return [int(p) for p in parts]


def read_aag(text: Union[str, TextIO]) -> Aig:
    """Parse AIGER ASCII text; AND definitions must be topologically ordered."""
    stream = io.StringIO(text) if isinstance(text, str) else text
    lines = [line.strip() for line in stream]
    if not lines or not lines[0].startswith("aag"):
        raise AigerFormatError("missing 'aag' header")
    header = lines[0].split()
    if len(header) != 6 or not all(p.isdigit() for p in header[1:]):
        raise AigerFormatError(f"malformed header '{lines[0]}'")
    max_var, num_inputs, num_latches, num_outputs, num_ands = (int(p) for p in header[1:])
    if num_latches != 0:
        raise AigerFormatError("latches are not supported")
    if num_outputs != 1:
        raise AigerFormatError(f"exactly one output is supported, got {num_outputs}")
    if num_inputs + num_ands > max_var:
        raise AigerFormatError("header M is smaller than I + A")
    if len(lines) < 2 + num_inputs + num_ands:
        raise AigerFormatError("file is truncated")

    aig = Aig(num_inputs)
    mapping = {0: 0}
    cursor = 1
    for i in range(num_inputs):
        (lit,) = _ints(lines[cursor], 1, cursor + 1)
        if lit < 2 or lit & 1 or lit_var(lit) in mapping or lit_var(lit) > max_var:
            raise AigerFormatError(f"line {cursor + 1}: invalid input literal {lit}")
        mapping[lit_var(lit)] = aig.input(i)
        cursor += 1
    (output,) = _ints(lines[cursor], 1, cursor + 1)
    cursor += 1

    def translate(lit: int, lineno: int) -> int:
        var = lit_var(lit)
        if var not in mapping:
            raise AigerFormatError(f"line {lineno}: literal {lit} used before its definition")
        return mapping[var] ^ (lit & 1)

    for _ in range(num_ands):
        lhs, rhs0, rhs1 = _ints(lines[cursor], 3, cursor + 1)
        if lhs & 1 or lit_var(lhs) in mapping or lit_var(lhs) > max_var:
            raise AigerFormatError(f"line {cursor + 1}: invalid AND literal {lhs}")
        mapping[lit_var(lhs)] = aig.new_and(
            translate(rhs0, cursor + 1), translate(rhs1, cursor + 1)
        )
        cursor += 1
    aig.output = translate(output, num_inputs + 2)
    return aig
