from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..arith import Operator, UnivariatePoly, format_poly, parse_poly
from ..field import ExtContext, ExtElement, FieldError, IrreduciblePoly, format_element, parse_element, parse_irreducible
from ..utils import sha256_hex
from .verifier import RejectReason, Verdict


TRANSCRIPT_VERSION = 1


class TranscriptFormatError(ValueError):
    pass


class DigestMismatchError(TranscriptFormatError):
    pass


@dataclass(frozen=True)
class TranscriptHeader:
    q: int
    irr: IrreduciblePoly
    seed: int | None
    rounds: int
    instance_digest: str
    version: int = TRANSCRIPT_VERSION


@dataclass(frozen=True)
class RoundRecord:
    t: int
    op: Operator
    msg: UnivariatePoly
    check: ExtElement | None
    # None when the round was rejected
    challenge: ExtElement | None
    claim: ExtElement | None


@dataclass(frozen=True)
class FinalRecord:
    matrix: ExtElement | None
    verdict: Verdict
    fail_round: int | None = None
    reason: RejectReason | None = None


@dataclass(frozen=True)
class Transcript:
    header: TranscriptHeader
    rounds: tuple[RoundRecord, ...]
    final: FinalRecord
    checksum_ok: bool = field(default=True, compare=False)

    @property
    def accepted(self) -> bool:
        return self.final.verdict is Verdict.ACCEPT


def _opt(value: ExtElement | None) -> str:
    return "-" if value is None else format_element(value)


def format_transcript(tr: Transcript) -> str:
    h = tr.header
    lines = [
        f"version {h.version}",
        f"q {h.q}",
        f"irr {h.irr}",
        f"seed {'-' if h.seed is None else h.seed}",
        f"rounds {h.rounds}",
        f"instance-digest {h.instance_digest}",
    ]
    for r in tr.rounds:
        lines.append(
            f"round {r.t} op {r.op} msg {format_poly(r.msg)} "
            f"check {_opt(r.check)} challenge {_opt(r.challenge)} claim {_opt(r.claim)}"
        )
    f = tr.final
    footer = f"final matrix {_opt(f.matrix)} verdict {f.verdict.value}"
    if f.verdict is Verdict.REJECT:
        footer += f" fail-round {f.fail_round} reason {f.reason.value}"
    lines.append(footer)
    body = "\n".join(lines) + "\n"
    return body + f"checksum {sha256_hex(body)}\n"


_HEADER = [
    ("version", r"\d+"),
    ("q", r"\d+"),
    ("irr", r"\d+(?:,\d+){4}"),
    ("seed", r"\d+|-"),
    ("rounds", r"\d+"),
    ("instance-digest", r"[0-9a-f]{64}"),
]
_ELT = r"\d+,\d+,\d+,\d+|-"
_ROUND = re.compile(
    rf"round (\d+) op ([EAR]\d+) msg (var=\d+; deg=\d+; coeffs=\S+) "
    rf"check ({_ELT}) challenge ({_ELT}) claim ({_ELT})$"
)
_FINAL = re.compile(rf"final matrix ({_ELT}) verdict (accept|reject)(?: fail-round (\d+) reason ([a-z-]+))?$")
_CHECKSUM = re.compile(r"checksum ([0-9a-f]{64})$")


def parse_transcript(text: str) -> Transcript:
    lines = text.splitlines()
    if len(lines) < len(_HEADER) + 2:
        raise TranscriptFormatError("transcript is truncated")
    values: dict[str, str] = {}
    for lineno, (key, pattern) in enumerate(_HEADER, start=1):
        m = re.fullmatch(rf"{key} ({pattern})", lines[lineno - 1])
        if m is None:
            raise TranscriptFormatError(f"line {lineno}: expected '{key} ...'")
        values[key] = m.group(1)
    if int(values["version"]) != TRANSCRIPT_VERSION:
        raise TranscriptFormatError(f"unsupported transcript version {values['version']}")

    q = int(values["q"])
    try:
        irr = parse_irreducible(values["irr"], q)
        ctx = ExtContext(q, irr)
    except FieldError as e:
        raise TranscriptFormatError(f"bad field parameters: {e}") from None
    header = TranscriptHeader(
        q=q,
        irr=irr,
        seed=None if values["seed"] == "-" else int(values["seed"]),
        rounds=int(values["rounds"]),
        instance_digest=values["instance-digest"],
    )

    checksum = _CHECKSUM.fullmatch(lines[-1])
    if checksum is None:
        raise TranscriptFormatError("missing checksum line")
    body = "\n".join(lines[:-1]) + "\n"
    checksum_ok = checksum.group(1) == sha256_hex(body)

    final_m = _FINAL.fullmatch(lines[-2])
    if final_m is None:
        raise TranscriptFormatError("missing final line")

    def elt(token: str) -> ExtElement | None:
        return None if token == "-" else parse_element(token, ctx)

    records: list[RoundRecord] = []
    try:
        for lineno, line in enumerate(lines[len(_HEADER):-2], start=len(_HEADER) + 1):
            m = _ROUND.fullmatch(line)
            if m is None:
                raise TranscriptFormatError(f"line {lineno}: malformed round record")
            t = int(m.group(1))
            if t != len(records) + 1:
                raise TranscriptFormatError(f"line {lineno}: expected round {len(records) + 1}, got {t}")
            records.append(
                RoundRecord(
                    t=t,
                    op=Operator.parse(m.group(2)),
                    msg=parse_poly(m.group(3), ctx),
                    check=elt(m.group(4)),
                    challenge=elt(m.group(5)),
                    claim=elt(m.group(6)),
                )
            )
        final = FinalRecord(
            matrix=elt(final_m.group(1)),
            verdict=Verdict(final_m.group(2)),
            fail_round=int(final_m.group(3)) if final_m.group(3) else None,
            reason=RejectReason(final_m.group(4)) if final_m.group(4) else None,
        )
    except (FieldError, ValueError) as e:
        if isinstance(e, TranscriptFormatError):
            raise
        raise TranscriptFormatError(str(e)) from None

    tr = Transcript(header, tuple(records), final, checksum_ok)
    _check_shape(tr)
    return tr


def _check_shape(tr: Transcript) -> None:
    T = tr.header.rounds
    rounds = tr.rounds
    f = tr.final
    if len(rounds) > T:
        raise TranscriptFormatError(f"{len(rounds)} round records for a {T}-round protocol")
    for r in rounds[:-1]:
        if r.challenge is None or r.claim is None:
            raise TranscriptFormatError(f"round {r.t} has no challenge but is not the last round")
    completed = all(r.challenge is not None for r in rounds)
    if f.verdict is Verdict.ACCEPT:
        if f.fail_round is not None:
            raise TranscriptFormatError("accepting transcript names a failing round")
        if len(rounds) != T or not completed or f.matrix is None:
            raise TranscriptFormatError(f"accepting transcript has {len(rounds)} of {T} rounds")
        return
    if f.fail_round is None or f.reason is None:
        raise TranscriptFormatError("rejecting transcript must name fail-round and reason")
    if f.reason is RejectReason.FINAL:
        if f.fail_round != T + 1 or len(rounds) != T or not completed or f.matrix is None:
            raise TranscriptFormatError("final-check reject needs all rounds and the matrix value")
    elif f.fail_round != len(rounds) or completed or f.matrix is not None:
        raise TranscriptFormatError(f"reject at round {f.fail_round} but {len(rounds)} round records")
