from .experiment import ExperimentMisuseError, ExperimentReport, TrialVerdict, soundness_experiment
from .params import MIN_MODULUS, ProtocolParams, choose_modulus, choose_params, modulus_lower_bound, round_count
from .provers import Prover, ProverStrategy, fix_anchor, prover_message
from .runner import VerificationReport, run_protocol, verify_transcript
from .transcript import (
    DigestMismatchError,
    FinalRecord,
    RoundRecord,
    Transcript,
    TranscriptFormatError,
    TranscriptHeader,
    format_transcript,
    parse_transcript,
)
from .verifier import (
    Continue,
    FinalCheck,
    Reject,
    RejectReason,
    RoundState,
    Verdict,
    advance,
    final_check,
    round_check,
    verifier_step,
)

__all__ = [
    "MIN_MODULUS",
    "Continue",
    "DigestMismatchError",
    "ExperimentMisuseError",
    "ExperimentReport",
    "FinalCheck",
    "FinalRecord",
    "ProtocolParams",
    "Prover",
    "ProverStrategy",
    "Reject",
    "RejectReason",
    "RoundRecord",
    "RoundState",
    "Transcript",
    "TranscriptFormatError",
    "TranscriptHeader",
    "TrialVerdict",
    "Verdict",
    "VerificationReport",
    "advance",
    "choose_modulus",
    "choose_params",
    "final_check",
    "fix_anchor",
    "format_transcript",
    "modulus_lower_bound",
    "parse_transcript",
    "prover_message",
    "round_check",
    "round_count",
    "run_protocol",
    "soundness_experiment",
    "verifier_step",
]
