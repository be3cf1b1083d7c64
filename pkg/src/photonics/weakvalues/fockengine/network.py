from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

import numpy as np
from photonics.weakvalues.fockengine.beamsplitter import apply_beam_splitter
from photonics.weakvalues.fockengine.beamsplitter import BeamSplitterSpec
from photonics.weakvalues.fockengine.fockstate import FockState
from photonics.weakvalues.fockengine.modes import ModeRegistry

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Stage:
    name: str
    splitters: Tuple[BeamSplitterSpec, ...]


class Network:
    """An ordered sequence of named stages of beam splitters over a fixed mode registry."""

    registry: ModeRegistry
    stages: Tuple[Stage, ...]

    def __init__(self, registry: ModeRegistry, stages: Sequence[Tuple[str, Sequence[BeamSplitterSpec]]]):
        self.registry = registry
        self.stages = tuple(Stage(name, tuple(splitters)) for name, splitters in stages)

        names = [stage.name for stage in self.stages]
        if len(set(names)) != len(names):
            raise ValueError(f"Network stage names must be unique (got {names})")

        for bs in self.splitters:
            # surfaces UnknownModeError at construction rather than first use
            registry.indices((bs.mode_a, bs.mode_b))

    @property
    def splitters(self) -> List[BeamSplitterSpec]:
        return [bs for stage in self.stages for bs in stage.splitters]

    @property
    def stage_names(self) -> List[str]:
        return [stage.name for stage in self.stages]

    def apply(self, state: FockState) -> FockState:
        if state.registry != self.registry:
            raise ValueError(f"State registry {state.registry} does not match network registry {self.registry}")

        for bs in self.splitters:
            state = apply_beam_splitter(state, bs)
        return state

    def transfer_matrix(self, stage_names: Optional[Sequence[str]] = None) -> np.ndarray:
        """
        Single-photon transfer matrix T of the given stages (all by default), composed in network order.  A photon
        entering mode j leaves in superposition sum_i T[i, j] |i>.
        """
        selected = self.stage_names if stage_names is None else list(stage_names)
        unknown = set(selected) - set(self.stage_names)
        if unknown:
            raise ValueError(f"Unknown network stages {sorted(unknown)} (known: {self.stage_names})")

        transfer = np.eye(self.registry.size, dtype=complex)
        for stage in self.stages:
            if stage.name not in selected:
                continue
            for bs in stage.splitters:
                ia, ib = self.registry.indices((bs.mode_a, bs.mode_b))
                embedded = np.eye(self.registry.size, dtype=complex)
                embedded[np.ix_([ia, ib], [ia, ib])] = bs.matrix()
                transfer = embedded @ transfer
        return transfer

    def split_transfer(self, boundary_stage: str) -> Tuple[np.ndarray, np.ndarray]:
        """Transfer matrices (before, from) the named stage, whose product late @ early is the full transfer matrix."""
        if boundary_stage not in self.stage_names:
            raise ValueError(f'Unknown network stage "{boundary_stage}" (known: {self.stage_names})')
        position = self.stage_names.index(boundary_stage)
        early = self.transfer_matrix(self.stage_names[:position])
        late = self.transfer_matrix(self.stage_names[position:])
        return early, late

    def __repr__(self):
        rendered = "; ".join(
            f"{stage.name}: " + ", ".join(f"{bs.mode_a}/{bs.mode_b}@{bs.eta:.4g}" for bs in stage.splitters)
            for stage in self.stages
        )
        return f"Network({rendered})"
