# coding=utf-8
"""
传输模块

寄存器耦合、点区共振隧穿、液滴区波包整形、单粒子演化与寄存器门提取。
"""

from tpst.transfer.dot import (
    detuned,
    dot_plan,
    run_dot_transfer,
    select_mode,
    three_mode_hamiltonian,
    three_mode_propagator,
)
from tpst.transfer.evolve import METHODS, evolve, evolve_block, step_size
from tpst.transfer.gate import (
    GateResult,
    cnot,
    gate_extract,
    gate_fidelity,
    gate_from_block,
    ideal_gate,
    local,
    local_z,
    remote_cnot,
    transfer_as_swap_cz,
)
from tpst.transfer.hamiltonian import FORMS, ExtendedHamiltonian, extend_hamiltonian
from tpst.transfer.models import (
    TRACE_HEADER,
    DotPlan,
    EdgeRoute,
    Pulse,
    RegisterSetup,
    TransferTrace,
    WavepacketPlan,
)
from tpst.transfer.shaping import (
    absorbed_profile,
    arrival_time,
    coupling_velocity,
    cylinder_length,
    droplet_plan,
    edge_route,
    emitted_profile,
    exponential_profile,
    gaussian_profile,
    lamb_coefficient,
    local_density,
    run_droplet_transfer,
    shape_emission,
    shape_retrieval,
)

__all__ = [
    "RegisterSetup",
    "DotPlan",
    "EdgeRoute",
    "Pulse",
    "WavepacketPlan",
    "TransferTrace",
    "TRACE_HEADER",
    "FORMS",
    "ExtendedHamiltonian",
    "extend_hamiltonian",
    "METHODS",
    "evolve",
    "evolve_block",
    "step_size",
    "select_mode",
    "dot_plan",
    "detuned",
    "three_mode_hamiltonian",
    "three_mode_propagator",
    "run_dot_transfer",
    "gaussian_profile",
    "exponential_profile",
    "local_density",
    "coupling_velocity",
    "lamb_coefficient",
    "droplet_plan",
    "edge_route",
    "cylinder_length",
    "shape_emission",
    "shape_retrieval",
    "run_droplet_transfer",
    "emitted_profile",
    "absorbed_profile",
    "arrival_time",
    "GateResult",
    "local",
    "local_z",
    "ideal_gate",
    "gate_from_block",
    "gate_fidelity",
    "gate_extract",
    "transfer_as_swap_cz",
    "cnot",
    "remote_cnot",
]
