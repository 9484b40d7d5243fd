"""Monte Carlo estimation of acceptance and detection rates.

Every trial seals fresh material, runs one respond/verify round, and counts
the outcome.  Trials get their own random.Random seeded by hashing the
master seed with the trial index, so results are reproducible bit-for-bit
and independent of how trials are scheduled; a thread pool can split the
index range without changing any count.

Reported intervals are 95% Wilson score intervals.
"""

from __future__ import annotations

import hashlib
import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from random import Random

from .bits import BitString
from .errors import InvalidInputError
from .seal import (
    BinaryTcf,
    CheatStrategy,
    NarySymmetric,
    ReturnKind,
    SealMode,
    VerifyMethod,
    alice_seal_binary,
    alice_seal_nary,
    alice_verify_classical,
    alice_verify_quantum,
    bob_respond,
    branch_count,
    compatible,
)
from .sparsestate import (
    SparseState,
    helstrom_discriminate,
    measure_computational,
    uniform_superposition,
)
from .tcf import TcfParams

Z95 = 1.959963984540054

DEFAULT_BIT_LEN = 16
NARY_SECRET_BYTES = 16

CSV_HEADER = "k,p_theory,p_hat,ci_low,ci_high,trials"


def wilson_interval(successes: int, trials: int, z: float = Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise InvalidInputError("trials must be >= 1")
    if not 0 <= successes <= trials:
        raise InvalidInputError("successes must lie in [0, trials]")
    p_hat = successes / trials
    denom = 1.0 + z * z / trials
    center = (p_hat + z * z / (2 * trials)) / denom
    half = (
        z
        * math.sqrt(p_hat * (1.0 - p_hat) / trials + z * z / (4.0 * trials * trials))
        / denom
    )
    # Observed extremes can never be excluded; pin them despite rounding.
    low = 0.0 if successes == 0 else max(0.0, center - half)
    high = 1.0 if successes == trials else min(1.0, center + half)
    return low, high


def theory_pcheck(k: int) -> float:
    """Closed-form per-branch detection probability for k branches."""
    if k < 1:
        raise InvalidInputError(f"k must be >= 1, got {k}")
    return 0.5 + 0.5 * math.sqrt(1.0 - 1.0 / k)


@dataclass(frozen=True)
class TrialConfig:
    mode: SealMode
    bit_len: int
    strategy: CheatStrategy
    return_kind: ReturnKind
    verify_method: VerifyMethod | None
    trials: int
    seed: int

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise InvalidInputError("trials must be >= 1")
        if not compatible(self.strategy, self.return_kind):
            raise InvalidInputError(
                f"strategy {self.strategy.value} cannot answer a "
                f"{self.return_kind.value} challenge"
            )
        if self.return_kind is ReturnKind.CLASSICAL:
            if self.verify_method is not None:
                raise InvalidInputError(
                    "classical challenges have a fixed check; leave "
                    "verify_method unset"
                )
            if branch_count(self.mode) != 2:
                raise InvalidInputError(
                    "classical challenges are defined only for two branches"
                )
        else:
            if self.verify_method is None:
                raise InvalidInputError("quantum challenges need a verify_method")
            if (
                self.strategy is CheatStrategy.HONEST
                and self.verify_method is VerifyMethod.HELSTROM_PER_BRANCH
            ):
                raise InvalidInputError(
                    "helstrom verification needs a cheating alternative; an "
                    "honest run has none"
                )
        if isinstance(self.mode, BinaryTcf):
            TcfParams(self.bit_len)  # reuse its width validation
        elif (1 << self.bit_len) < 4 * self.mode.k:
            raise InvalidInputError(
                f"bit_len {self.bit_len} too small for {self.mode.k} branches"
            )

    @property
    def statistic(self) -> str:
        """Which rate run_trials reports for this configuration."""
        if (
            self.return_kind is ReturnKind.QUANTUM
            and self.strategy is not CheatStrategy.HONEST
        ):
            return "detection"
        return "acceptance"


@dataclass(frozen=True, slots=True)
class EstimateReport:
    statistic: str
    p_hat: float
    ci_low: float
    ci_high: float
    trials: int
    p_theory: float | None


@dataclass(frozen=True, slots=True)
class CurvePoint:
    k: int
    p_theory: float
    p_hat: float
    ci_low: float
    ci_high: float
    trials: int


def _spawned_rng(master_seed: int, *path: int | str) -> Random:
    """Independent stream derived from the master seed and a label path."""
    h = hashlib.sha256(b"qseal/rng" + struct.pack(">q", master_seed))
    for part in path:
        if isinstance(part, int):
            h.update(b"i" + struct.pack(">q", part))
        else:
            data = part.encode()
            h.update(b"s" + struct.pack(">I", len(data)) + data)
    return Random(int.from_bytes(h.digest()[:8], "big"))


def theory_rate(config: TrialConfig) -> float | None:
    """Exact expected rate for the configured statistic, where known."""
    k = branch_count(config.mode)
    if config.return_kind is ReturnKind.CLASSICAL:
        if config.strategy is CheatStrategy.HONEST:
            return 1.0
        return 0.5  # a random mask hits the orthogonal half exactly
    if config.strategy is CheatStrategy.HONEST:
        return 1.0
    if config.strategy is CheatStrategy.MEASURE_KEEP:
        if config.verify_method is VerifyMethod.HELSTROM_PER_BRANCH:
            return theory_pcheck(k)
        return 1.0 - 1.0 / k
    # MEASURE_RANDOM_STATE: the fresh string collides with a branch with
    # probability k/2^n, in which case it looks like a kept measurement.
    collide = k / float(1 << config.bit_len)
    if config.verify_method is VerifyMethod.HELSTROM_PER_BRANCH:
        return 1.0 - collide * (1.0 - theory_pcheck(k))
    return 1.0 - 1.0 / float(1 << config.bit_len)


def _run_one(config: TrialConfig, index: int) -> bool:
    """One seal/respond/verify round; True when the tracked event occurred."""
    rng = _spawned_rng(config.seed, "trial", index)
    if isinstance(config.mode, BinaryTcf):
        package, record = alice_seal_binary(TcfParams(config.bit_len), rng)
    else:
        secret = rng.getrandbits(8 * NARY_SECRET_BYTES).to_bytes(
            NARY_SECRET_BYTES, "big"
        )
        package, record = alice_seal_nary(
            config.mode.k, secret, config.bit_len, rng
        )
    message = bob_respond(package, config.strategy, config.return_kind, rng)
    if config.return_kind is ReturnKind.CLASSICAL:
        accepted = alice_verify_classical(record, message.mask)
    else:
        accepted = alice_verify_quantum(
            record, message.state, config.verify_method, rng
        )
    if config.statistic == "detection":
        return not accepted
    return accepted


def _count_range(config: TrialConfig, start: int, stop: int) -> int:
    return sum(1 for index in range(start, stop) if _run_one(config, index))


def run_trials(config: TrialConfig, workers: int = 1) -> EstimateReport:
    """Estimate the configured statistic over config.trials rounds."""
    if workers < 1:
        raise InvalidInputError("workers must be >= 1")
    if workers == 1 or config.trials < 2 * workers:
        successes = _count_range(config, 0, config.trials)
    else:
        chunk = (config.trials + workers - 1) // workers
        bounds = [
            (start, min(start + chunk, config.trials))
            for start in range(0, config.trials, chunk)
        ]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            successes = sum(
                pool.map(lambda b: _count_range(config, b[0], b[1]), bounds)
            )
    low, high = wilson_interval(successes, config.trials)
    return EstimateReport(
        statistic=config.statistic,
        p_hat=successes / config.trials,
        ci_low=low,
        ci_high=high,
        trials=config.trials,
        p_theory=theory_rate(config),
    )


def fig1_curve(
    k_max: int,
    trials_per_point: int,
    bit_len: int = DEFAULT_BIT_LEN,
    seed: int = 0,
    workers: int = 1,
) -> list[CurvePoint]:
    """Detection-vs-branch-count sweep for the kept-measurement cheater.

    One point per k in [2, k_max]: n-ary seal, quantum return, per-branch
    Helstrom verification, paired with the closed-form curve.
    """
    if k_max < 2:
        raise InvalidInputError(f"k_max must be >= 2, got {k_max}")
    points: list[CurvePoint] = []
    for k in range(2, k_max + 1):
        config = TrialConfig(
            mode=NarySymmetric(k),
            bit_len=bit_len,
            strategy=CheatStrategy.MEASURE_KEEP,
            return_kind=ReturnKind.QUANTUM,
            verify_method=VerifyMethod.HELSTROM_PER_BRANCH,
            trials=trials_per_point,
            seed=_spawned_rng(seed, "curve", k).getrandbits(63),
        )
        report = run_trials(config, workers=workers)
        points.append(
            CurvePoint(
                k=k,
                p_theory=theory_pcheck(k),
                p_hat=report.p_hat,
                ci_low=report.ci_low,
                ci_high=report.ci_high,
                trials=report.trials,
            )
        )
    return points


def curve_csv(points: list[CurvePoint]) -> str:
    """Render curve points as CSV with a fixed header and 6-decimal reals."""
    lines = [CSV_HEADER]
    for pt in points:
        lines.append(
            f"{pt.k},{pt.p_theory:.6f},{pt.p_hat:.6f},"
            f"{pt.ci_low:.6f},{pt.ci_high:.6f},{pt.trials}"
        )
    return "\n".join(lines) + "\n"


def mixture_diagnostic(
    bit_len: int = DEFAULT_BIT_LEN, trials: int = 100_000, seed: int = 0
) -> EstimateReport:
    """Discrimination success when the verifier is NOT told the branch.

    Each trial flips a fair coin between an honest return (the original
    two-branch state) and a read-then-keep cheat (a collapsed branch), then
    applies the optimal test of "original state" against "uniform branch
    mixture": project onto the original, onto its in-span complement, and
    coin-flip outside the span.  The reported statistic is the equal-prior
    success rate, 3/4 in theory for two branches; it sits below the
    per-branch detection figure because here nobody tells the verifier
    which branch the cheater kept.
    """
    if trials < 1:
        raise InvalidInputError("trials must be >= 1")
    if bit_len < 3:
        raise InvalidInputError(f"bit_len must be >= 3, got {bit_len}")
    amp = 1.0 / math.sqrt(2.0)
    successes = 0
    for index in range(trials):
        rng = _spawned_rng(seed, "mixture", index)
        x1 = BitString.random(bit_len, rng)
        x2 = x1
        while x2 == x1:
            x2 = BitString.random(bit_len, rng)
        original = uniform_superposition((x1, x2))
        # In-span complement of the original: same branches, opposite signs.
        complement = SparseState(bit_len, {x1: amp, x2: -amp})
        honest = rng.random() < 0.5
        if honest:
            truth = original
        else:
            _, truth = measure_computational(original, rng)
        said_honest = helstrom_discriminate(truth, original, complement, rng) == 0
        if said_honest == honest:
            successes += 1
    low, high = wilson_interval(successes, trials)
    return EstimateReport(
        statistic="discrimination_success",
        p_hat=successes / trials,
        ci_low=low,
        ci_high=high,
        trials=trials,
        p_theory=0.75,
    )
