"""Continuous-time Monte Carlo of the open TASEP: entering current by batch means.

The hot loop lives in a compiled extension when one was built; otherwise the
pure-Python kernel is used. Both consume the same stream of uniforms, so a
given seed yields identical statistics whichever kernel runs. Setting
``TASEP_TQ_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import math
import os
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import _gillespie_py
from .errors import InsufficientStatisticsError, PreconditionError

try:
    from . import _gillespie as _compiled
except ImportError:  # pragma: no cover - depends on the build
    _compiled = None

KERNELS = {"python": _gillespie_py.advance}
if _compiled is not None:
    KERNELS["cython"] = _compiled.advance

if os.environ.get("TASEP_TQ_PURE_PYTHON") == "1" or _compiled is None:
    KERNEL = "python"
else:
    KERNEL = "cython"

N_BATCHES = 20
CHUNK = 1 << 16


@dataclass(frozen=True)
class SimConfig:
    L: int
    alpha: float = 1.0
    beta: float = 1.0
    horizon: float = 1e6
    seed: int = 0
    burn_in: float = 0.1

    def __post_init__(self):
        if self.L < 1:
            raise PreconditionError("simulation needs L >= 1")
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise PreconditionError(f"{name} must be a finite nonnegative rate")
        if not self.horizon > 0:
            raise PreconditionError("horizon must be positive")
        if not 0 <= self.burn_in < 1:
            raise PreconditionError("burn_in is a fraction in [0, 1)")
        if not 0 <= self.seed < 2**64:
            raise PreconditionError("seed must fit in 64 bits")

    @classmethod
    def from_boundary(cls, L: int, a, b, **kw) -> "SimConfig":
        """Rates from the boundary parameters: alpha = 1/(1+a), beta = 1/(1+b)."""
        return cls(L, float(1 / (1 + Fraction(a))), float(1 / (1 + Fraction(b))), **kw)


@dataclass(frozen=True)
class CurrentStats:
    entries: int
    elapsed: float
    mean: float
    stderr: float
    batch_means: tuple = field(repr=False)
    occupancy: float          # time-averaged occupation of site 1
    occupancy_stderr: float
    kernel: str

    def to_json(self) -> dict:
        d = asdict(self)
        d["batch_means"] = list(self.batch_means)
        return d


def _batch_stats(values) -> tuple[float, float]:
    arr = np.asarray(values, dtype=float)
    return float(arr.mean()), float(arr.std(ddof=1) / math.sqrt(len(arr)))


def simulate(cfg: SimConfig, kernel: str | None = None) -> CurrentStats:
    """Gillespie simulation from the empty lattice; 20 batch means after burn-in."""
    name = kernel or KERNEL
    try:
        advance = KERNELS[name]
    except KeyError:
        raise PreconditionError(f"kernel {name!r} not available; have {sorted(KERNELS)}") from None
    rng = np.random.default_rng(cfg.seed)
    occ = np.zeros(cfg.L, dtype=np.int8)
    u = rng.random(CHUNK)
    state = {"t": 0.0, "pos": 0, "u": u}

    def run_until(t_end):
        entries, occ1 = 0, 0.0
        while True:
            t, pos, e, o = advance(occ, cfg.alpha, cfg.beta, state["t"], t_end, state["u"], state["pos"])
            entries += e
            occ1 += o
            state["t"], state["pos"] = t, pos
            if t >= t_end:
                return entries, occ1
            state["u"], state["pos"] = rng.random(CHUNK), 0

    t0 = cfg.burn_in * cfg.horizon
    if t0 > 0:
        run_until(t0)
    width = (cfg.horizon - t0) / N_BATCHES
    currents, occupancies, total = [], [], 0
    for i in range(N_BATCHES):
        end = cfg.horizon if i == N_BATCHES - 1 else t0 + (i + 1) * width
        start = state["t"]
        e, o = run_until(end)
        total += e
        currents.append(e / (end - start))
        occupancies.append(o / (end - start))
    elapsed = cfg.horizon - t0
    _, stderr = _batch_stats(currents)
    occ_mean, occ_err = _batch_stats(occupancies)
    return CurrentStats(total, elapsed, total / elapsed, stderr, tuple(currents), occ_mean, occ_err, name)


@dataclass(frozen=True)
class ValidationReport:
    prediction: Fraction
    mean: float
    stderr: float
    z: float
    passed: bool

    def to_json(self) -> dict:
        return {"prediction": f"{self.prediction.numerator}/{self.prediction.denominator}",
                "mean": self.mean, "stderr": self.stderr, "z": self.z, "passed": self.passed}


def validate_first_cumulant(cfg: SimConfig, prediction, stats: CurrentStats | None = None) -> ValidationReport:
    """z-test of the simulated mean current against an exact prediction; pass iff z < 3."""
    prediction = Fraction(prediction)
    stats = stats if stats is not None else simulate(cfg)
    if stats.stderr <= 0:
        raise InsufficientStatisticsError("zero standard error: the run is degenerate")
    z = abs(stats.mean - float(prediction)) / stats.stderr
    return ValidationReport(prediction, stats.mean, stats.stderr, z, z < 3)
