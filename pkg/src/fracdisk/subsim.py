"""Subordinator sampling, inverse clocks, and time-changed Brownian motion.

The clock H is simulated on a fixed step grid: H(j dt) accumulates exact
stable (or tempered stable) increments plus the optional drift.  The inverse
clock at level t is read off as dt * min{j : H(j dt) > t}, which carries an
O(dt) positive bias; tolerances downstream account for it.

Randomness is organized through ``RngStream``: one (seed, stream) pair owns
independent channels, with channel 0 feeding the clock and channel 1 the
Brownian motion, so the clock path is unchanged if only the Brownian channel
is swapped.
"""

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import AcceptanceRateError, DomainError, HorizonError, InvariantError

__all__ = [
    "RngStream",
    "SubordinatorPath",
    "sample_stable_increment",
    "sample_tempered_increment",
    "sample_subordinator_path",
    "inverse_at",
    "sample_inverse",
    "sample_inverse_batch",
    "sample_timechanged_bm",
    "sample_timechanged_bm_batch",
    "dump_path_csv",
    "dump_inverse_csv",
]

_CLOCK_CHANNEL = 0
_BROWNIAN_CHANNEL = 1


@dataclass(frozen=True)
class RngStream:
    """Reproducible random source: (seed, stream_id) plus derived channels.

    ``generator(channel)`` returns a fresh ``numpy.random.Generator`` seeded
    from SeedSequence(seed, spawn_key=(stream_id, channel)).  Equal
    (seed, stream_id, channel) triples always yield identical sequences;
    distinct triples are statistically independent.
    """

    seed: int
    stream_id: int = 0

    def generator(self, channel=0):
        ss = np.random.SeedSequence(
            entropy=int(self.seed), spawn_key=(int(self.stream_id), int(channel))
        )
        return np.random.default_rng(ss)

    def clock(self):
        """Generator for subordinator increments (channel 0)."""
        return self.generator(_CLOCK_CHANNEL)

    def brownian(self):
        """Generator for the Brownian channel (channel 1)."""
        return self.generator(_BROWNIAN_CHANNEL)

    def substream(self, stream_id):
        """Sibling stream with the same seed and a different stream id."""
        return RngStream(seed=self.seed, stream_id=stream_id)


def _as_generator(rng):
    if rng is None:
        return np.random.default_rng()
    if isinstance(rng, RngStream):
        return rng.clock()
    return rng


def sample_stable_increment(alpha, dt, rng=None, size=None):
    """Increments of the standard alpha-stable subordinator over step dt.

    Exact in law: E[exp(-theta X)] = exp(-dt theta^alpha).  Uses the
    Kanter representation

        X = dt^{1/alpha} * (sin(alpha U)/sin(U)^{1/alpha})
                         * (sin((1-alpha) U)/W)^{(1-alpha)/alpha}

    with U uniform on (0, pi) and W standard exponential.  alpha = 1 is the
    degenerate clock: X = dt exactly.

    Returns a scalar for size=None, else an array of that shape.
    """
    alpha = float(alpha)
    dt = float(dt)
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must be in (0, 1], got {alpha}")
    if dt <= 0.0:
        raise DomainError(f"dt must be > 0, got {dt}")
    scalar = size is None
    n = 1 if scalar else int(np.prod(size))
    if alpha == 1.0:
        out = np.full(n, dt)
    else:
        gen = _as_generator(rng)
        u = gen.uniform(0.0, np.pi, n)
        w = gen.standard_exponential(n)
        ratio = (1.0 - alpha) / alpha
        out = (
            dt ** (1.0 / alpha)
            * (np.sin(alpha * u) / np.sin(u) ** (1.0 / alpha))
            * (np.sin((1.0 - alpha) * u) / w) ** ratio
        )
    if scalar:
        return float(out[0])
    return out.reshape(size)


def sample_tempered_increment(alpha, mu, dt, rng=None, size=None):
    """Increments of the tempered stable subordinator over step dt.

    Exact in law via exponential tilting: draw stable increments and accept
    with probability exp(-mu X).  The acceptance rate is exp(-dt mu^alpha)
    and must stay at or above 0.1; shrink dt otherwise.

    Raises
    ------
    AcceptanceRateError
        If exp(-dt mu^alpha) < 0.1.
    """
    alpha = float(alpha)
    mu = float(mu)
    dt = float(dt)
    if mu < 0.0:
        raise DomainError(f"mu must be >= 0, got {mu}")
    if mu == 0.0 or alpha == 1.0:
        return sample_stable_increment(alpha, dt, rng, size)
    rate = math.exp(-dt * mu ** alpha)
    if rate < 0.1:
        raise AcceptanceRateError(
            f"tilting acceptance rate {rate:.3g} below 0.1 for dt={dt}, "
            f"mu={mu}, alpha={alpha}; reduce the step"
        )
    gen = _as_generator(rng)
    scalar = size is None
    n = 1 if scalar else int(np.prod(size))
    out = np.empty(n)
    filled = 0
    while filled < n:
        want = n - filled
        # oversample by the expected rejection factor, lightly padded
        m = int(want / rate * 1.1) + 16
        x = sample_stable_increment(alpha, dt, gen, size=m)
        keep = x[gen.random(m) < np.exp(-mu * x)]
        take = min(keep.size, want)
        out[filled : filled + take] = keep[:take]
        filled += take
    if scalar:
        return float(out[0])
    return out.reshape(size)


def _increment_sampler(spec):
    """Per-step increment draw for a clock spec, drift included."""
    a, mu, b = spec.alpha, spec.mu, spec.drift_b

    def draw(dt, gen, n):
        x = sample_tempered_increment(a, mu, dt, gen, size=n) if mu > 0.0 \
            else sample_stable_increment(a, dt, gen, size=n)
        if b > 0.0:
            x = x + b * dt
        return x

    return draw


@dataclass
class SubordinatorPath:
    """Clock path on a fixed grid: values[j] = H(j * step_dt), values[0] = 0."""

    step_dt: float
    values: np.ndarray
    spec: object = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.step_dt <= 0.0:
            raise DomainError(f"step_dt must be > 0, got {self.step_dt}")
        if self.values.ndim != 1 or self.values.size < 2:
            raise DomainError("path needs at least the origin and one step")
        if self.values[0] != 0.0:
            raise InvariantError("path must start at H(0) = 0")
        if np.any(np.diff(self.values) < 0.0):
            raise InvariantError("subordinator path must be nondecreasing")

    @property
    def horizon(self):
        return float(self.values[-1])

    def grid(self):
        return self.step_dt * np.arange(self.values.size)


def sample_subordinator_path(spec, horizon, step_dt, rng=None, max_steps=10 ** 8):
    """Simulate the clock on its step grid until it strictly exceeds horizon.

    Returns a ``SubordinatorPath`` whose last value is the first grid value
    above ``horizon`` (so every inverse query up to horizon is answerable).
    """
    horizon = float(horizon)
    step_dt = float(step_dt)
    if horizon < 0.0:
        raise DomainError(f"horizon must be >= 0, got {horizon}")
    if step_dt <= 0.0:
        raise DomainError(f"step_dt must be > 0, got {step_dt}")
    gen = _as_generator(rng)
    draw = _increment_sampler(spec)
    chunks = [np.zeros(1)]
    total = 0.0
    steps = 0
    block = 1024
    while total <= horizon:
        if steps > max_steps:
            raise HorizonError(
                f"clock needed more than {max_steps} steps to pass "
                f"horizon {horizon:g}; increase step_dt"
            )
        inc = draw(step_dt, gen, block)
        csum = total + np.cumsum(inc)
        chunks.append(csum)
        total = float(csum[-1])
        steps += block
    values = np.concatenate(chunks)
    stop = int(np.searchsorted(values, horizon, side="right"))
    return SubordinatorPath(step_dt=step_dt, values=values[: stop + 1], spec=spec)


def inverse_at(path, t):
    """Grid inverse clock: dt * min{j : H(j dt) > t}.

    Raises HorizonError if the path never exceeds t.
    """
    t = float(t)
    if t < 0.0:
        raise DomainError(f"t must be >= 0, got {t}")
    idx = int(np.searchsorted(path.values, t, side="right"))
    if idx >= path.values.size:
        raise HorizonError(
            f"path horizon {path.horizon:g} does not exceed t = {t:g}"
        )
    return idx * path.step_dt


def sample_inverse(spec, times, step_dt, rng=None):
    """Inverse clock E(t) at each requested time along one fresh path.

    Returns an array aligned with ``times``; values are nondecreasing in t
    because a single path is inverted at every level.
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(times < 0.0):
        raise DomainError("times must be >= 0")
    path = sample_subordinator_path(spec, float(times.max()), step_dt, rng)
    idx = np.searchsorted(path.values, times, side="right")
    return idx * path.step_dt


def crossing_counts(draw_increments, levels, n_paths, gen, max_steps=10 ** 8, block=512):
    """Steps needed by cumulative-sum paths to strictly exceed each level.

    ``draw_increments(gen, n)`` supplies i.i.d. positive step increments.
    ``levels`` must be sorted ascending.  Returns an int64 array of shape
    (n_paths, len(levels)): entry (p, j) is min{m : sum_{i<=m} X_i > levels[j]}.

    This is the shared engine behind batched inverse clocks and the renewal
    counts of the discrete scheme: both are first-passage functionals of a
    cumulative sum.
    """
    levels = np.asarray(levels, dtype=float)
    if levels.ndim != 1 or levels.size == 0:
        raise DomainError("levels must be a nonempty 1-d array")
    if np.any(np.diff(levels) < 0.0):
        raise DomainError("levels must be sorted ascending")
    n_levels = levels.size
    out = np.zeros((n_paths, n_levels), dtype=np.int64)
    # paths are processed in chunks to bound the (chunk x block) work arrays
    chunk = max(1, min(n_paths, 8192))
    for lo in range(0, n_paths, chunk):
        hi = min(lo + chunk, n_paths)
        m = hi - lo
        base = np.zeros(m)
        next_level = np.zeros(m, dtype=np.intp)
        steps_done = 0
        alive = np.arange(m)
        while alive.size:
            if steps_done > max_steps:
                raise HorizonError(
                    f"crossing search exceeded {max_steps} steps per path"
                )
            inc = draw_increments(gen, alive.size * block).reshape(alive.size, block)
            cum = np.cumsum(inc, axis=1)
            cum += base[alive, None]
            # a path can cross several levels inside one block
            rows = np.arange(alive.size)
            while rows.size:
                lev = levels[next_level[alive[rows]]]
                sub = cum[rows]
                hit = sub[:, -1] > lev
                if not np.any(hit):
                    break
                hit_rows = rows[hit]
                pos = np.argmax(
                    cum[hit_rows] > levels[next_level[alive[hit_rows]], None], axis=1
                )
                out[lo + alive[hit_rows], next_level[alive[hit_rows]]] = (
                    steps_done + pos + 1
                )
                next_level[alive[hit_rows]] += 1
                done = next_level[alive[hit_rows]] >= n_levels
                rows = hit_rows[~done]
            base[alive] = cum[:, -1]
            steps_done += block
            alive = alive[next_level[alive] < n_levels]
    return out


def sample_inverse_batch(spec, times, step_dt, rng=None, n_paths=1):
    """Inverse clock at each time for ``n_paths`` independent paths.

    Returns shape (n_paths, len(times)).  ``times`` must be ascending.
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(np.diff(times) < 0.0):
        raise DomainError("times must be ascending for batched inversion")
    if np.any(times < 0.0):
        raise DomainError("times must be >= 0")
    step_dt = float(step_dt)
    if step_dt <= 0.0:
        raise DomainError(f"step_dt must be > 0, got {step_dt}")
    gen = _as_generator(rng)
    draw = _increment_sampler(spec)
    counts = crossing_counts(
        lambda g, n: draw(step_dt, g, n), times, int(n_paths), gen
    )
    return counts * step_dt


def sample_timechanged_bm(spec, times, step_dt, rng=None):
    """One path of B(E(t)) at the requested ascending times.

    ``rng`` should be an RngStream (or None for a random seed): the clock
    uses channel 0 and the Brownian increments channel 1.  Returns an array
    aligned with ``times``.
    """
    return sample_timechanged_bm_batch(spec, times, step_dt, rng, n_paths=1)[0]


def sample_timechanged_bm_batch(spec, times, step_dt, rng=None, n_paths=1):
    """Independent paths of B(E(t)); shape (n_paths, len(times)).

    The Brownian increments over [E(t_{i-1}), E(t_i)] are exact Gaussians
    conditional on the clock, so the only discretization error is the O(dt)
    bias of the grid inverse clock.
    """
    if rng is None:
        rng = RngStream(seed=int(np.random.SeedSequence().entropy))
    if not isinstance(rng, RngStream):
        raise DomainError(
            "time-changed sampling needs an RngStream so the clock and "
            "Brownian channels stay separated"
        )
    times = np.atleast_1d(np.asarray(times, dtype=float))
    ev = sample_inverse_batch(spec, times, step_dt, rng.clock(), n_paths)
    gen_b = rng.brownian()
    dE = np.diff(np.concatenate([np.zeros((ev.shape[0], 1)), ev], axis=1), axis=1)
    steps = gen_b.standard_normal(dE.shape) * np.sqrt(dE)
    return np.cumsum(steps, axis=1)


def dump_path_csv(path, fileobj):
    """Write a clock path as rows ``s,H`` (RFC 4180, 17 significant digits)."""
    writer = csv.writer(fileobj)
    writer.writerow(["s", "H"])
    for s, h in zip(path.grid(), path.values):
        writer.writerow([f"{s:.17g}", f"{h:.17g}"])


def dump_inverse_csv(times, evalues, fileobj):
    """Write inverse-clock samples as rows ``t,E``."""
    writer = csv.writer(fileobj)
    writer.writerow(["t", "E"])
    for t, e in zip(np.atleast_1d(times), np.atleast_1d(evalues)):
        writer.writerow([f"{t:.17g}", f"{e:.17g}"])
