"""
Simulation of weak value against measurement strength.  At each target strength a calibration run (signal |D>,
unpostselected) estimates K, and an independent postselected run measures the meter imbalance.
"""
from __future__ import annotations

import csv
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from dataclasses import field
from typing import Any
from typing import Dict
from typing import IO
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

from photonics.weakvalues.analytic.meter import MeterSetting
from photonics.weakvalues.analytic.polarization import Polarization
from photonics.weakvalues.counting.estimators import Estimate
from photonics.weakvalues.counting.estimators import estimate_knowledge
from photonics.weakvalues.counting.estimators import estimate_weak_value
from photonics.weakvalues.counting.export import atomic_output
from photonics.weakvalues.counting.export import dumps_metadata
from photonics.weakvalues.counting.export import format_optional
from photonics.weakvalues.counting.export import package_versions
from photonics.weakvalues.counting.runplan import RunPlan
from photonics.weakvalues.counting.samples import RNG_ALGORITHM
from photonics.weakvalues.counting.samples import RunType
from photonics.weakvalues.counting.samples import sample_counts
from photonics.weakvalues.counting.samples import stream_seed
from photonics.weakvalues.device.config import DeviceConfig
from photonics.weakvalues.imperfection.model import model_coincidence_distribution
from photonics.weakvalues.imperfection.model import model_postselection
from photonics.weakvalues.imperfection.params import ImperfectionParams
from photonics.weakvalues.utils.errors import EmptyCountsError
from photonics.weakvalues.utils.errors import IndeterminateStrengthError
from photonics.weakvalues.utils.errors import ParameterRangeError
from photonics.weakvalues.utils.misc import format_real
from photonics.weakvalues.utils.misc import limit_log_length
from tqdm import tqdm

log = logging.getLogger(__name__)

CSV_HEADER = ("K_true", "K_hat", "K_sigma", "wv", "wv_sigma", "wv_worst", "unbounded")
NO_DATA = "no_data"


@dataclass(frozen=True)
class PointModel:
    """True outcome probabilities at one target strength."""

    K_true: float
    calibration: Dict[str, float]
    postselected: Optional[Dict[str, float]]


@dataclass(frozen=True)
class Fig2Row:
    K_true: float
    knowledge: Optional[Estimate]
    weak_value: Optional[Estimate]

    @property
    def has_data(self) -> bool:
        return self.weak_value is not None

    def csv_cells(self) -> List[str]:
        knowledge, weak_value = self.knowledge, self.weak_value
        return [
            format_real(self.K_true),
            format_optional(knowledge.value if knowledge else None),
            format_optional(knowledge.sigma if knowledge else None),
            format_optional(weak_value.value if weak_value else None),
            format_optional(weak_value.sigma if weak_value else None),
            format_optional(weak_value.worst_case if weak_value else None),
            NO_DATA if weak_value is None else str(weak_value.unbounded_above).lower(),
        ]


@dataclass(frozen=True)
class Fig2Table:
    rows: Tuple[Fig2Row, ...]
    metadata: Dict[str, Any] = field(default_factory=dict)

    def write_csv(self, stream: IO[str]):
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        writer.writerows(row.csv_cells() for row in self.rows)

    def to_csv(self, path: str):
        with atomic_output(path) as stream:
            self.write_csv(stream)

    def metadata_json(self) -> str:
        return dumps_metadata(self.metadata)

    def to_metadata_json(self, path: str):
        with atomic_output(path) as stream:
            stream.write(self.metadata_json())


def point_model(
    K: float, psi: Polarization, params: ImperfectionParams, cfg: DeviceConfig = DeviceConfig()
) -> PointModel:
    meter = MeterSetting.from_strength(K)
    calibration = model_coincidence_distribution(params, meter, cfg=cfg)
    prediction = model_postselection(params, psi, meter, cfg)
    postselected = (
        {"H": prediction.p_meter_h_given_post, "V": prediction.p_meter_v_given_post} if prediction.defined else None
    )
    return PointModel(float(K), calibration, postselected)


def simulate_point(grid_index: int, model: PointModel, plan: RunPlan) -> Fig2Row:
    calibration_sample = sample_counts(
        model.calibration,
        plan.unpostselected_rate,
        plan.duration_K,
        stream_seed(plan.seed, grid_index, RunType.KNOWLEDGE),
    )
    try:
        knowledge = estimate_knowledge(calibration_sample)
    except EmptyCountsError:
        log.warning(f"No calibration counts at K={model.K_true:g}; row has no data")
        return Fig2Row(model.K_true, None, None)

    if model.postselected is None:
        log.warning(f"Postselection cannot occur at K={model.K_true:g}; row has no data")
        return Fig2Row(model.K_true, knowledge, None)

    postselected_sample = sample_counts(
        model.postselected,
        plan.postselected_rate,
        plan.duration_wv,
        stream_seed(plan.seed, grid_index, RunType.WEAK_VALUE),
    )
    try:
        weak_value = estimate_weak_value(postselected_sample, knowledge)
    except (EmptyCountsError, IndeterminateStrengthError) as err:
        log.warning(f"Weak value undefined at K={model.K_true:g} ({err.code}); row has no data")
        return Fig2Row(model.K_true, knowledge, None)

    log.debug(f"K={model.K_true:g}: K_hat={knowledge.value:.6g}+-{knowledge.sigma:.3g}, wv={weak_value.value:.6g}")
    return Fig2Row(model.K_true, knowledge, weak_value)


def build_metadata(
    plan: RunPlan, psi: Polarization, params: ImperfectionParams, K_grid: Sequence[float], cfg: DeviceConfig
) -> Dict[str, Any]:
    return {
        "seed": plan.seed,
        "rng": RNG_ALGORITHM,
        "plan": plan.to_dict(),
        "model": params.to_dict(),
        "device": {
            "interfering_eta": cfg.interfering_eta,
            "balance_eta": cfg.balance_eta,
            "hadamard_eta": cfg.hadamard_eta,
        },
        "signal": {
            "alpha": [psi.alpha.real, psi.alpha.imag],
            "beta": [psi.beta.real, psi.beta.imag],
        },
        "K_grid": [float(K) for K in K_grid],
        "postselection": "A",
        "versions": package_versions(),
    }


def run_fig2(
    plan: RunPlan,
    psi: Polarization,
    params: ImperfectionParams,
    K_grid: Sequence[float],
    cfg: DeviceConfig = DeviceConfig(),
    workers: int = 1,
    progress: bool = False,
) -> Fig2Table:
    """
    One row per target strength, in grid order.  Each (grid point, run type) draws from its own stream derived from the
    plan's seed, so the table is identical for any worker count.
    """
    if len(K_grid) == 0:
        raise ParameterRangeError("Strength grid is empty", code="empty-grid")
    if workers < 1:
        raise ParameterRangeError(f"Worker count must be at least 1 (got {workers})")

    log.info(limit_log_length(f"Simulating {len(K_grid)} strengths with {plan} and {params}"))

    def simulate(indexed_K: Tuple[int, float]) -> Fig2Row:
        grid_index, K = indexed_K
        return simulate_point(grid_index, point_model(K, psi, params, cfg), plan)

    with ThreadPoolExecutor(max_workers=workers) as executor:
        rows = list(
            tqdm(
                executor.map(simulate, enumerate(K_grid)),
                total=len(K_grid),
                desc="strength grid",
                disable=not progress,
            )
        )

    return Fig2Table(tuple(rows), build_metadata(plan, psi, params, K_grid, cfg))


def monte_carlo_weak_values(
    plan: RunPlan,
    psi: Polarization,
    params: ImperfectionParams,
    K: float,
    n_seeds: int,
    cfg: DeviceConfig = DeviceConfig(),
    progress: bool = False,
) -> List[Fig2Row]:
    """Repeat the experiment at one strength for seeds plan.seed, plan.seed + 1, ..."""
    model = point_model(K, psi, params, cfg)
    return [
        simulate_point(0, model, plan.with_seed(plan.seed + offset))
        for offset in tqdm(range(n_seeds), desc="seeds", disable=not progress)
    ]
