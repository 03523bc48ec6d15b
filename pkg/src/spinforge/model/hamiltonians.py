"""自然、有效与塞曼哈密顿量.

系数按 rad/s 存储；SpinHalf 约定下每个两体乘积 S_a I_b 相对 Pauli
约定带 1/4 因子，由 spin_term 吸收。
"""

from __future__ import annotations

from spinforge.algebra.convention import DEFAULT_CONVENTION, SpinConvention
from spinforge.algebra.pauli import OperatorSum, PauliString, spin_term
from spinforge.model.topology import CARBON_SITE, ChainTopology, CouplingConstants, ZeemanParams


def _bond_terms(
    i: int, j: int, zz: float, xx: float, yy: float, convention: SpinConvention
) -> list[PauliString]:
    return [
        spin_term(zz, {i: "Z", j: "Z"}, convention),
        spin_term(xx, {i: "X", j: "X"}, convention),
        spin_term(yy, {i: "Y", j: "Y"}, convention),
    ]


def _environment_terms(
    topo: ChainTopology, j_hh: float, convention: SpinConvention
) -> list[PauliString]:
    """J Σ_α Σ_k [2 I_z I_z − (I_x I_x + I_y I_y)]."""
    if j_hh == 0:
        return []
    terms: list[PauliString] = []
    for i, j in topo.hydrogen_bonds():
        terms += _bond_terms(i, j, 2.0 * j_hh, -j_hh, -j_hh, convention)
    return terms


def build_natural_hamiltonian(
    topo: ChainTopology,
    couplings: CouplingConstants,
    convention: SpinConvention = DEFAULT_CONVENTION,
) -> OperatorSum:
    """旋转坐标系下的 H = H_SE + H_E.

    H_SE = J_ch Σ_α S_z I_z^{α,1}，只有纵向项，不能翻转碳自旋。
    耦合为零的块不产生项；一般情况下项数为 2 + 6(N−1)。
    """
    terms: list[PauliString] = []
    if couplings.j_ch != 0:
        terms += [
            spin_term(couplings.j_ch, {c: "Z", h: "Z"}, convention)
            for c, h in topo.carbon_bonds()
        ]
    terms += _environment_terms(topo, couplings.j_hh, convention)
    return OperatorSum(tuple(terms), topo.n_sites, convention)


def build_effective_hamiltonian(
    topo: ChainTopology,
    couplings: CouplingConstants,
    convention: SpinConvention = DEFAULT_CONVENTION,
) -> OperatorSum:
    """四脉冲循环零阶平均后的有效哈密顿量.

    H_eff = J_ch^eff Σ_α (2 S_z I_z + S_x I_x + S_y I_y)^{α,1}
          + J_hh^eff Σ_α Σ_k [2 I_z I_z − I_x I_x − I_y I_y]，J^eff = J/4。
    """
    j_ch, j_hh = couplings.j_ch_eff, couplings.j_hh_eff
    terms: list[PauliString] = []
    if j_ch != 0:
        for c, h in topo.carbon_bonds():
            terms += _bond_terms(c, h, 2.0 * j_ch, j_ch, j_ch, convention)
    terms += _environment_terms(topo, j_hh, convention)
    return OperatorSum(tuple(terms), topo.n_sites, convention)


def build_zeeman(
    zeeman: ZeemanParams,
    convention: SpinConvention = DEFAULT_CONVENTION,
    n_sites: int = 1,
    site: int = CARBON_SITE,
) -> OperatorSum:
    """H_1 = −(1/2) ħ ω_1 S_z，单位为 J (hbar=1 时为 rad/s)；基态为 |0⟩."""
    coefficient = -0.5 * zeeman.hbar * zeeman.omega1
    return OperatorSum((spin_term(coefficient, {site: "Z"}, convention),), n_sites, convention)


def total_z(n_sites: int) -> OperatorSum:
    """Σ_i σ_z^{(i)}."""
    return OperatorSum(
        tuple(PauliString.from_map(1.0, {site: "Z"}) for site in range(n_sites)), n_sites
    )


def site_pauli(n_sites: int, site: int, label: str) -> OperatorSum:
    """单格点 Pauli 可观测量 σ_label(site)."""
    return OperatorSum.single(n_sites, site, label)
