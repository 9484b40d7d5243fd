"""Seal-and-verify protocol roles.

Alice seals a secret into a superposition register and hands Bob a package.
Reading the secret is always possible: Bob measures the register and either
evaluates the committed function on the outcome (binary mode) or decrypts
the matching ciphertext (n-ary mode).  Reading is also destructive, which is
what verification leans on.  Alice can demand the register back and test it
against her retained copy, or demand a Hadamard-basis measurement outcome
and check it against the branch difference.

Cheat strategies model a Bob who reads before responding.  The catalogue is
deliberately small and explicit; each strategy says exactly what is measured
and what goes back on the wire.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from random import Random

from .bits import BitString
from .errors import (
    InvalidInputError,
    ProtocolCorruptionError,
    UnsupportedModeError,
)
from .sparsestate import (
    AMP_TOL,
    SparseState,
    hadamard_measure,
    helstrom_discriminate,
    inner_product,
    measure_computational,
    singleton,
    uniform_superposition,
)
from .symcrypto import Ciphertext, enc, find_and_dec, key_tag
from .tcf import TcfKeyPair, TcfOracle, TcfParams, keygen, sample_claw

# Upper bound on superposition branches in n-ary mode.
MAX_BRANCHES = 64


@dataclass(frozen=True, slots=True)
class BinaryTcf:
    """Two branches forming a claw of a committed 2-to-1 function."""


@dataclass(frozen=True, slots=True)
class NarySymmetric:
    """k random branches, each keying a ciphertext of the secret."""

    k: int

    def __post_init__(self) -> None:
        if not 2 <= self.k <= MAX_BRANCHES:
            raise InvalidInputError(
                f"branch count must be in [2, {MAX_BRANCHES}], got {self.k}"
            )


SealMode = BinaryTcf | NarySymmetric


def branch_count(mode: SealMode) -> int:
    return 2 if isinstance(mode, BinaryTcf) else mode.k


class CheatStrategy(Enum):
    HONEST = "honest"
    # Read the register, send back whatever it collapsed to.
    MEASURE_KEEP = "measure-keep"
    # Read the register, send back a fresh uniformly random basis state.
    MEASURE_RANDOM_STATE = "measure-random-state"
    # Read the register, answer the Hadamard challenge with a random guess.
    MEASURE_GUESS_MASK = "measure-guess-d"


class ReturnKind(Enum):
    QUANTUM = "quantum"
    CLASSICAL = "classical"


class VerifyMethod(Enum):
    PROJECTIVE = "projective"
    HELSTROM_PER_BRANCH = "helstrom"


def compatible(strategy: CheatStrategy, kind: ReturnKind) -> bool:
    """Which strategies can answer which challenge kinds."""
    if strategy is CheatStrategy.HONEST:
        return True
    if strategy is CheatStrategy.MEASURE_GUESS_MASK:
        return kind is ReturnKind.CLASSICAL
    return kind is ReturnKind.QUANTUM


@dataclass(frozen=True)
class SealPackage:
    """What Bob receives: the register plus the opening material."""

    mode: SealMode
    bit_len: int
    register: SparseState
    tcf: TcfOracle | None = None
    ciphertexts: tuple[Ciphertext, ...] | None = None

    def __post_init__(self) -> None:
        if self.register.bit_len != self.bit_len:
            raise InvalidInputError("register width does not match bit_len")
        if isinstance(self.mode, BinaryTcf):
            if self.tcf is None or self.ciphertexts is not None:
                raise InvalidInputError(
                    "binary packages carry a function handle and no ciphertexts"
                )
            if self.register.num_branches != 2:
                raise InvalidInputError("binary register must have 2 branches")
            first, second = self.register.branches
            if self.tcf.eval(first) != self.tcf.eval(second):
                raise ProtocolCorruptionError(
                    "register branches do not form a claw"
                )
        else:
            if self.ciphertexts is None or self.tcf is not None:
                raise InvalidInputError(
                    "n-ary packages carry ciphertexts and no function handle"
                )
            k = self.mode.k
            if self.register.num_branches != k:
                raise InvalidInputError(
                    f"register must have {k} branches, found "
                    f"{self.register.num_branches}"
                )
            expected_amp = 1.0 / math.sqrt(k)
            for amp in self.register.terms.values():
                if abs(amp - expected_amp) > AMP_TOL:
                    raise InvalidInputError(
                        "n-ary register amplitudes must all be 1/sqrt(k)"
                    )
            if len(self.ciphertexts) != k:
                raise InvalidInputError(
                    f"need {k} ciphertexts, found {len(self.ciphertexts)}"
                )
            tags = [ct.key_tag for ct in self.ciphertexts]
            for branch in self.register.branches:
                if tags.count(key_tag(branch)) != 1:
                    raise ProtocolCorruptionError(
                        f"branch {branch.hex()} must match exactly one ciphertext"
                    )


@dataclass(frozen=True)
class AliceSecret:
    """Alice's retained record of one sealing."""

    mode: SealMode
    secret: bytes
    branches: tuple[BitString, ...]
    trapdoor: BitString | None
    original_state: SparseState

    def __post_init__(self) -> None:
        if len(set(self.branches)) != len(self.branches):
            raise InvalidInputError("branch strings must be distinct")
        if len(self.branches) != branch_count(self.mode):
            raise InvalidInputError("branch count does not match mode")
        if set(self.branches) != set(self.original_state.branches):
            raise InvalidInputError("retained state must span the branches")
        if isinstance(self.mode, BinaryTcf) and self.trapdoor is None:
            raise InvalidInputError("binary secrets retain the trapdoor")

    @property
    def bit_len(self) -> int:
        return self.original_state.bit_len


@dataclass(frozen=True, slots=True)
class QuantumReturn:
    state: SparseState


@dataclass(frozen=True, slots=True)
class ClassicalReturn:
    mask: BitString


ReturnMessage = QuantumReturn | ClassicalReturn


# ---------------------------------------------------------------------------
# Alice: sealing
# ---------------------------------------------------------------------------


def alice_seal_binary(
    params: TcfParams, rng: Random
) -> tuple[SealPackage, AliceSecret]:
    """Commit a fresh 2-to-1 instance and seal a claw superposition.

    The sealed secret is the claw's image.
    """
    keypair: TcfKeyPair = keygen(params, rng)
    claw = sample_claw(keypair, rng)
    register = uniform_superposition((claw.x1, claw.x2))
    package = SealPackage(
        mode=BinaryTcf(),
        bit_len=params.bit_len,
        register=register,
        tcf=keypair.oracle(),
    )
    record = AliceSecret(
        mode=BinaryTcf(),
        secret=claw.image,
        branches=(claw.x1, claw.x2),
        trapdoor=keypair.shift,
        original_state=register,
    )
    return package, record


def alice_seal_nary(
    k: int, secret: bytes, bit_len: int, rng: Random
) -> tuple[SealPackage, AliceSecret]:
    """Seal ``secret`` under k fresh random branch keys.

    Each branch string keys one ciphertext of the secret, so any
    computational-basis readout of the register opens the seal.
    """
    mode = NarySymmetric(k)
    if not secret:
        raise InvalidInputError("secret must be nonempty")
    if bit_len < 1:
        raise InvalidInputError(f"bit_len must be >= 1, got {bit_len}")
    if (1 << bit_len) < 4 * k:
        # Keeps rejection sampling of distinct branches fast and collisions rare.
        raise InvalidInputError(
            f"bit_len {bit_len} too small for {k} branches; need 2^bit_len >= 4k"
        )
    chosen: list[BitString] = []
    seen: set[BitString] = set()
    while len(chosen) < k:
        candidate = BitString.random(bit_len, rng)
        if candidate in seen:
            continue
        seen.add(candidate)
        chosen.append(candidate)
    register = uniform_superposition(chosen)
    package = SealPackage(
        mode=mode,
        bit_len=bit_len,
        register=register,
        ciphertexts=tuple(enc(branch, secret) for branch in chosen),
    )
    record = AliceSecret(
        mode=mode,
        secret=secret,
        branches=tuple(chosen),
        trapdoor=None,
        original_state=register,
    )
    return package, record


# ---------------------------------------------------------------------------
# Bob: opening and responding
# ---------------------------------------------------------------------------


def bob_open(package: SealPackage, rng: Random) -> bytes:
    """Read the sealed secret by measuring the register.

    Succeeds with certainty on honest packages: every branch opens to the
    same secret.  The register in the package value is untouched; opening an
    already collapsed register is deterministic.
    """
    outcome, _ = measure_computational(package.register, rng)
    if isinstance(package.mode, BinaryTcf):
        assert package.tcf is not None
        return package.tcf.eval(outcome)
    assert package.ciphertexts is not None
    try:
        return find_and_dec(outcome, package.ciphertexts)
    except Exception as exc:
        raise ProtocolCorruptionError(
            "measured branch does not open any ciphertext"
        ) from exc


def bob_respond(
    package: SealPackage,
    strategy: CheatStrategy,
    kind: ReturnKind,
    rng: Random,
) -> ReturnMessage:
    """Produce Bob's answer to Alice's return challenge.

    The register travels back inside the message (quantum) or is consumed
    by the Hadamard measurement (classical); either way this call is the
    single use of the package in a trial.
    """
    if not compatible(strategy, kind):
        raise UnsupportedModeError(
            f"strategy {strategy.value} cannot answer a {kind.value} challenge"
        )
    if strategy is CheatStrategy.HONEST:
        if kind is ReturnKind.QUANTUM:
            return QuantumReturn(package.register)
        return ClassicalReturn(hadamard_measure(package.register, rng))
    # Every cheating strategy reads the register first.
    _, collapsed = measure_computational(package.register, rng)
    if strategy is CheatStrategy.MEASURE_KEEP:
        return QuantumReturn(collapsed)
    if strategy is CheatStrategy.MEASURE_RANDOM_STATE:
        return QuantumReturn(singleton(BitString.random(package.bit_len, rng)))
    return ClassicalReturn(BitString.random(package.bit_len, rng))


# ---------------------------------------------------------------------------
# Alice: verification
# ---------------------------------------------------------------------------


def alice_verify_quantum(
    record: AliceSecret,
    returned: SparseState,
    method: VerifyMethod,
    rng: Random,
    alternative: SparseState | None = None,
) -> bool:
    """Test a returned register against the retained original.  True = accept.

    PROJECTIVE measures {|psi><psi|, 1 - |psi><psi|} and accepts on the
    first outcome, so acceptance probability is the squared overlap.

    HELSTROM_PER_BRANCH runs the optimal two-hypothesis test between the
    original and a declared alternative, accepting when the original is
    reported.  The alternative defaults to the returned state itself, which
    models a verifier told what a cheater would have sent; a returned state
    equal to the original leaves nothing to test and is accepted outright.
    """
    original = record.original_state
    if returned.bit_len != original.bit_len:
        raise InvalidInputError("returned state width does not match the seal")
    if method is VerifyMethod.PROJECTIVE:
        overlap = inner_product(original, returned)
        return rng.random() < overlap * overlap
    if alternative is None:
        if returned.isclose(original):
            return True
        alternative = returned
    elif alternative.isclose(original):
        raise InvalidInputError(
            "alternative hypothesis equals the original state"
        )
    outcome = helstrom_discriminate(returned, original, alternative, rng)
    return outcome == 0


def alice_verify_classical(record: AliceSecret, mask: BitString) -> bool:
    """Check a Hadamard-basis outcome against the branch difference.

    For a two-branch seal every honest outcome satisfies
    mask . (x1 xor x2) = 0 over GF(2); accept exactly when that holds.
    The all-zero mask is a valid honest outcome and is accepted.
    """
    if len(record.branches) != 2:
        raise UnsupportedModeError(
            "classical verification is defined only for two-branch seals"
        )
    if mask.bit_len != record.bit_len:
        raise InvalidInputError("mask width does not match the seal")
    x1, x2 = record.branches
    return mask.dot(x1 ^ x2) == 0
