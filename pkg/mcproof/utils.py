from __future__ import annotations

import hashlib

import numpy as np

from .fo import Instance, format_instance


U64_MASK = (1 << 64) - 1


def derive_seed(master_seed: int, index: int) -> int:
    """Per-trial u64 seed from (master seed, trial index)."""
    h = hashlib.blake2b(f"{master_seed}:{index}".encode("utf-8"), digest_size=8)
    return int.from_bytes(h.digest(), "big")


def seed_streams(seed: int) -> tuple[np.random.Generator, np.random.Generator, np.random.Generator]:
    """Independent (setup, verifier, prover) generators split from one run seed."""
    setup, verifier, prover = np.random.SeedSequence(seed & U64_MASK).spawn(3)
    return np.random.default_rng(setup), np.random.default_rng(verifier), np.random.default_rng(prover)


def sha256_hex(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def instance_digest(inst: Instance) -> str:
    return sha256_hex(format_instance(inst))
