"""Stochastic error injection and scaling measurements.

Trajectories run on the classical batch engine: per layer, every qubit
touched by a gate in that layer suffers each enabled error kind
independently with probability p.  Bit flips toggle the basis key; phase
flips toggle a tracked sign that is reported but excluded from the
bit-correctness metric.  A trial fails when the measured output word
differs from the table entry or the address register comes back disturbed.
"""
from __future__ import annotations

import csv
import hashlib
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .builders.spec import BuilderSpec, build
from .classical import CompiledCircuit, basis_batch
from .tables import BitTable, random_table

CHUNK = 16384  # fixed batch partition; results do not depend on worker count
ERROR_KINDS = ("bitflip", "phaseflip")


def _mix(*parts) -> int:
    digest = hashlib.sha256(repr(parts).encode()).digest()
    return int.from_bytes(digest[:8], "little")


def _rng(*parts) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=_mix(*parts)))


def wilson_interval(successes: int, total: int, z: float = 1.959964) -> tuple[float, float]:
    if total == 0:
        return (0.0, 1.0)
    if successes == 0:
        return (0.0, min(1.0, z * z / (total + z * z)))
    if successes == total:
        return (1.0 - min(1.0, z * z / (total + z * z)), 1.0)
    ph = successes / total
    denom = 1.0 + z * z / total
    centre = (ph + z * z / (2 * total)) / denom
    half = (
        z
        * math.sqrt(ph * (1 - ph) / total + z * z / (4 * total * total))
        / denom
    )
    return (max(0.0, centre - half), min(1.0, centre + half))


@dataclass(frozen=True)
class NoiseModel:
    p: float
    kinds: tuple[str, ...] = ("bitflip",)
    persistent: bool = False
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must be in [0, 1]")
        if not self.kinds:
            raise ValueError("at least one error kind required")
        for k in self.kinds:
            if k not in ERROR_KINDS:
                raise ValueError(f"unknown error kind {k!r}")


@dataclass(frozen=True)
class TrialOutcome:
    output_word: int
    address_intact: bool
    error_count: int
    sign_flipped: bool

    @property
    def output_bit(self) -> int:
        return self.output_word & 1


@dataclass(frozen=True)
class InfidelityEstimate:
    builder: str
    n: int
    p: float
    trials: int
    seed: int
    estimate: float
    ci_lo: float
    ci_hi: float
    phase_flip_rate: float
    failures: int


def _bernoulli_positions(rng: np.random.Generator, cells: int, p: float) -> np.ndarray:
    """Indices of an exact Bernoulli(p) process over ``cells`` slots."""
    if p <= 0.0 or cells == 0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(cells, dtype=np.int64)
    chunks = []
    pos = -1
    batch = int(cells * p * 1.3) + 32
    while True:
        gaps = rng.geometric(p, size=batch)
        cum = np.cumsum(gaps) + pos
        take = cum[cum < cells]
        chunks.append(take.astype(np.int64))
        if len(take) < len(cum):
            break
        pos = int(cum[-1])
    return np.concatenate(chunks)


class TrajectoryEngine:
    """Reusable noisy-trajectory runner for one built circuit."""

    def __init__(
        self,
        circuit,
        table: BitTable,
        protected_layers: int = 0,
    ):
        self.compiled = CompiledCircuit(circuit)
        self.table = table.padded_to_power_of_two()
        self.n = self.table.n
        protected: set[int] = set()
        if protected_layers > 0 and circuit.meta.get("builder") == "bucket_brigade":
            nodes = (1 << protected_layers) - 1
            w = self.table.word_width
            layout = self.compiled.layout
            for i in range(min(nodes, self.n - 1)):
                protected.add(layout.offsets["c"] + i)
                for b in range(w):
                    protected.add(layout.offsets["r"] + i * w + b)
        if protected:
            self.sites = [
                np.array([q for q in layer if q not in protected], dtype=np.int64)
                for layer in self.compiled.layer_sites
            ]
        else:
            self.sites = self.compiled.layer_sites
        self.site_concat = (
            np.concatenate(self.sites) if self.sites else np.empty(0, np.int64)
        )
        counts = [len(s) for s in self.sites]
        self.layer_offsets = np.concatenate(([0], np.cumsum(counts)))
        self.total_sites = int(self.layer_offsets[-1])
        # one noiseless reference per address
        addr_cases = [{"addr": a} for a in range(self.n)]
        ref = basis_batch(self.compiled, addr_cases)
        self.ref_init = ref.copy()
        self.ref_final = self.compiled.run(ref.copy())
        self.addr_cols = self.compiled.register_columns("addr")
        self.out_cols = self.compiled.register_columns("out")

    def run_chunk(
        self, addresses: np.ndarray, p: float, kinds: tuple[str, ...], rng
    ):
        """Run one batch of noisy trajectories at the given addresses."""
        b = len(addresses)
        nk = len(kinds)
        cells_per_trial = self.total_sites * nk
        states = self.ref_init[addresses].copy()
        sign = np.zeros(b, dtype=bool)
        error_counts = np.zeros(b, dtype=np.int64)
        events_x: dict[int, tuple] = {}
        events_z: dict[int, tuple] = {}
        if cells_per_trial and p > 0:
            pos = _bernoulli_positions(rng, b * cells_per_trial, p)
            if len(pos):
                trials = pos // cells_per_trial
                cell = pos % cells_per_trial
                site = cell // nk
                kind_idx = cell % nk
                layer = (
                    np.searchsorted(self.layer_offsets, site, side="right") - 1
                )
                qubit = self.site_concat[site]
                np.add.at(error_counts, trials, 1)
                for ki, kname in enumerate(kinds):
                    mask = kind_idx == ki
                    if not mask.any():
                        continue
                    bucket = events_x if kname == "bitflip" else events_z
                    lay = layer[mask]
                    order = np.argsort(lay, kind="stable")
                    lay = lay[order]
                    rows = trials[mask][order]
                    cols = qubit[mask][order]
                    bounds = np.searchsorted(lay, np.arange(len(self.sites) + 1))
                    for t in range(len(self.sites)):
                        lo, hi = bounds[t], bounds[t + 1]
                        if lo < hi:
                            bucket[t] = (rows[lo:hi], cols[lo:hi])

        def inject(layer_idx, s):
            ev = events_x.get(layer_idx)
            if ev is not None:
                s[ev[0], ev[1]] ^= True  # cells are distinct, plain XOR is safe
            evz = events_z.get(layer_idx)
            if evz is not None:
                np.logical_xor.at(sign, evz[0], s[evz[0], evz[1]])

        final = self.compiled.run(states, inject=inject)
        ref = self.ref_final[addresses]
        wrong_out = (final[:, self.out_cols] != ref[:, self.out_cols]).any(axis=1)
        addr_bad = (
            final[:, self.addr_cols] != self.ref_init[addresses][:, self.addr_cols]
        ).any(axis=1)
        return wrong_out, addr_bad, sign, error_counts, final


def _default_table(n: int, seed: int) -> BitTable:
    return random_table(n, 1, seed=_mix("table", n, seed))


def run_noisy_query(
    spec: BuilderSpec, table: BitTable, address: int, noise: NoiseModel
) -> TrialOutcome:
    """Run a single noisy trajectory and report its outcome."""
    padded = table.padded_to_power_of_two()
    if not 0 <= address < padded.n:
        raise ValueError("address out of range")
    circuit = build(spec, table)
    engine = TrajectoryEngine(circuit, table)
    rng = _rng("query", noise.seed)
    wrong_out, addr_bad, sign, counts, final = engine.run_chunk(
        np.array([address]), noise.p, noise.kinds, rng
    )
    word = 0
    for bit, col in enumerate(engine.out_cols):
        word |= int(final[0, col]) << bit
    return TrialOutcome(
        output_word=word,
        address_intact=not bool(addr_bad[0]),
        error_count=int(counts[0]),
        sign_flipped=bool(sign[0]),
    )


def estimate_infidelity(
    kind: str,
    n: int,
    p: float,
    trials: int,
    kinds: tuple[str, ...] = ("bitflip",),
    seed: int = 0,
    table: BitTable | None = None,
    protected_layers: int = 0,
    spec: BuilderSpec | None = None,
) -> InfidelityEstimate:
    """Failure fraction over uniformly random basis addresses.

    Uses a fixed random table per (n, seed); a trial fails when the output
    word is wrong or the address register is disturbed.  Wilson 95% CI.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if p > 0.1:
        raise ValueError("estimates are only supported for p <= 0.1")
    if kind == "parallel_sorted":
        raise ValueError("infidelity estimation targets single-address builders")
    if table is None:
        table = _default_table(n, seed)
    spec = spec or BuilderSpec(kind=kind)
    circuit = build(spec, table)
    engine = TrajectoryEngine(circuit, table, protected_layers=protected_layers)
    failures = 0
    phase_flips = 0
    done = 0
    chunk_index = 0
    while done < trials:
        b = min(CHUNK, trials - done)
        rng = _rng("infid", kind, n, seed, chunk_index)
        addresses = rng.integers(0, engine.n, size=b)
        wrong_out, addr_bad, sign, _, _ = engine.run_chunk(addresses, p, kinds, rng)
        failures += int((wrong_out | addr_bad).sum())
        phase_flips += int(sign.sum())
        done += b
        chunk_index += 1
    lo, hi = wilson_interval(failures, trials)
    return InfidelityEstimate(
        builder=kind,
        n=engine.n,
        p=p,
        trials=trials,
        seed=seed,
        estimate=failures / trials,
        ci_lo=lo,
        ci_hi=hi,
        phase_flip_rate=phase_flips / trials,
        failures=failures,
    )


def _workers() -> int:
    raw = os.environ.get("QRAMWB_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return max(1, min(4, os.cpu_count() or 1))


def scaling_sweep(
    kind: str,
    ns,
    p: float,
    trials_per_seed: int,
    seeds,
    kinds: tuple[str, ...] = ("bitflip",),
) -> list[InfidelityEstimate]:
    """One pooled estimate per table size, averaging over per-seed tables.

    Pooling over several random tables removes the small-N density lottery
    from the per-point estimates; each point still reports a Wilson CI over
    the pooled trial count.  Points run on a small worker pool (capped by
    QRAMWB_THREADS); results are identical for any worker count.
    """
    seeds = list(seeds)

    def one_point(n: int) -> InfidelityEstimate:
        fails = 0
        phase = 0.0
        total = 0
        for s in seeds:
            e = estimate_infidelity(kind, n, p, trials_per_seed, kinds=kinds, seed=s)
            fails += e.failures
            phase += e.phase_flip_rate * e.trials
            total += e.trials
        lo, hi = wilson_interval(fails, total)
        return InfidelityEstimate(
            builder=kind,
            n=n,
            p=p,
            trials=total,
            seed=seeds[0],
            estimate=fails / total,
            ci_lo=lo,
            ci_hi=hi,
            phase_flip_rate=phase / total,
            failures=fails,
        )

    ns = list(ns)
    workers = min(_workers(), len(ns)) or 1
    if workers == 1:
        return [one_point(n) for n in ns]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one_point, ns))


def fit_points(estimates) -> list[tuple[float, float, float]]:
    """Fit-ready (N, infidelity, ci-halfwidth) points in the valid domain."""
    return [
        (e.n, e.estimate, (e.ci_hi - e.ci_lo) / 2)
        for e in estimates
        if 0.0 < e.estimate < 0.5
    ]


# ---------------------------------------------------------------------------
# Scaling fits


@dataclass(frozen=True)
class ScalingFit:
    points: tuple
    model: str
    exponent: float
    stderr: float
    r_squared: float
    log_prefactor: float


def fit_scaling(points, model: str) -> ScalingFit:
    """Least squares on log(y) against log(x) or log(log(x)).

    ``points`` holds (x, y, ci_halfwidth) with y in (0, 0.5); at least four
    points with a nondegenerate x-range are required.
    """
    if model not in ("power_in_N", "power_in_logN"):
        raise ValueError(f"unknown fit model {model!r}")
    pts = [tuple(map(float, p[:3])) if len(p) >= 3 else (float(p[0]), float(p[1]), 0.0) for p in points]
    if len(pts) < 4:
        raise ValueError("need at least 4 points")
    for x, y, _ in pts:
        if not 0.0 < y < 0.5:
            raise ValueError(f"infidelity {y} outside (0, 0.5)")
        if model == "power_in_logN" and x <= 1.0:
            raise ValueError("power_in_logN needs x > 1")
    if model == "power_in_N":
        xs = [math.log(x) for x, _, _ in pts]
    else:
        xs = [math.log(math.log(x)) for x, _, _ in pts]
    ys = [math.log(y) for _, y, _ in pts]
    n = len(pts)
    sx = sum(xs)
    sy = sum(ys)
    sxx = sum(x * x for x in xs)
    sxy = sum(x * y for x, y in zip(xs, ys))
    denom = sxx - sx * sx / n
    if denom <= 1e-12:
        raise ValueError("degenerate x-range")
    slope = (sxy - sx * sy / n) / denom
    intercept = (sy - slope * sx) / n
    resid = [y - (intercept + slope * x) for x, y in zip(xs, ys)]
    ss_res = sum(r * r for r in resid)
    mean_y = sy / n
    ss_tot = sum((y - mean_y) ** 2 for y in ys)
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    stderr = (
        math.sqrt(ss_res / (n - 2) / denom) if n > 2 and ss_res > 0 else 0.0
    )
    return ScalingFit(
        points=tuple(pts),
        model=model,
        exponent=slope,
        stderr=stderr,
        r_squared=r2,
        log_prefactor=intercept,
    )


# ---------------------------------------------------------------------------
# Persistent routing-state corruption across queries


@dataclass(frozen=True)
class PersistentAccumulation:
    n: int
    p: float
    queries: int
    trials: int
    seed: int
    fraction_by_query: tuple[float, ...]
    cumulative_burden: tuple[float, ...]


def simulate_persistent_accumulation(
    n: int, p: float, queries: int, trials: int, seed: int = 0
) -> PersistentAccumulation:
    """Routing-node corruption with no reset between queries.

    Each access gives each of the 2(N-1) routing-tree qubits a persistent
    error with probability p; corrupted nodes stay corrupted.  Returned are
    the mean corrupted fraction after each query and its running sum (the
    corruption burden seen by a Q-query protocol, the quantity that grows
    quadratically in Q).
    """
    if queries < 1 or trials < 1:
        raise ValueError("queries and trials must be >= 1")
    nodes = 2 * (n - 1) if n > 1 else 1
    rng = _rng("persistent", n, seed)
    corrupted = np.zeros((trials, nodes), dtype=bool)
    fractions = []
    for _ in range(queries):
        if p > 0:
            corrupted |= rng.random((trials, nodes)) < p
        fractions.append(float(corrupted.mean()))
    burden = np.cumsum(fractions)
    return PersistentAccumulation(
        n=n,
        p=p,
        queries=queries,
        trials=trials,
        seed=seed,
        fraction_by_query=tuple(fractions),
        cumulative_burden=tuple(float(x) for x in burden),
    )


# ---------------------------------------------------------------------------
# Heralded shuffle suppression


@dataclass(frozen=True)
class DerangementResult:
    m: int
    p: float
    trials: int
    seed: int
    herald_pass_rate: float
    herald_failure_rate: float
    conditional_infidelity: float


def simulate_derangement(
    m: int, p: float, trials: int, seed: int = 0
) -> DerangementResult:
    """Stochastic model of the m-way shuffled access with a parity herald.

    Each of the m slots errs independently with probability p.  The query
    rides one slot (slot choice is uniform by the shuffle's symmetry); an
    error on that slot is caught by the all-zero herald except with
    probability 1/m, in which case the access passes but is corrupted.
    Errors on no-op slots leave both the herald and the query invariant.
    """
    if m < 2:
        raise ValueError("need m >= 2 shuffle slots")
    if p > 0.1:
        raise ValueError("model is calibrated for p <= 0.1")
    rng = _rng("derangement", m, seed)
    slot_errors = rng.random(trials) < p  # error on the query's own slot
    escapes = rng.integers(0, m, size=trials) == 0
    herald_fail = slot_errors & ~escapes
    corrupted = slot_errors & escapes
    passed = ~herald_fail
    n_pass = int(passed.sum())
    cond = float(corrupted.sum() / n_pass) if n_pass else 0.0
    return DerangementResult(
        m=m,
        p=p,
        trials=trials,
        seed=seed,
        herald_pass_rate=n_pass / trials,
        herald_failure_rate=1.0 - n_pass / trials,
        conditional_infidelity=cond,
    )


# ---------------------------------------------------------------------------
# Sweep CSV (plot toolchain input contract)

SWEEP_COLUMNS = (
    "builder",
    "N",
    "p",
    "trials",
    "seed",
    "infidelity",
    "ci_lo",
    "ci_hi",
)


def write_sweep_csv(path, estimates: list[InfidelityEstimate]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_COLUMNS)
        for e in estimates:
            writer.writerow(
                [
                    e.builder,
                    e.n,
                    format(e.p, ".10g"),
                    e.trials,
                    e.seed,
                    format(e.estimate, ".10g"),
                    format(e.ci_lo, ".10g"),
                    format(e.ci_hi, ".10g"),
                ]
            )
