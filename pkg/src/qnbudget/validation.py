"""Cross-module consistency checks behind the `validate` CLI verb.

Each check compares two independent routes to the same quantity and reports
the worst relative deviation against a fixed tolerance.  The randomized
checks draw from a seeded generator, so a report is deterministic for a
given configuration and seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import fdt, ifo, limits
from .config import IfoConfig, InternalSqueeze, config_hash
from .quadrature import (SYMPLECTIC_FORM, ponderomotive_decompose,
                         ponderomotive_matrix, rotation_matrix, squeeze_matrix)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CheckResult:
    name: str
    deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.deviation <= self.tolerance


@dataclass(frozen=True)
class ValidationReport:
    config_sha256: str
    seed: int
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self):
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            yield (f"{status}  {c.name:24s} max rel deviation {c.deviation:.3e} "
                   f"(tolerance {c.tolerance:.1e})")


def random_config(rng: np.random.Generator, with_losses: bool = True) -> IfoConfig:
    """Draw a physically valid configuration, safe from the lasing threshold."""
    t_src = 10.0 ** rng.uniform(-2.0, math.log10(0.5))
    # unity round-trip gain needs e^|r| to reach 1/sqrt(1 - T_src)
    r_cap = -0.5 * math.log1p(-t_src)
    mode = rng.choice(["none", "fixed"])
    sqz = InternalSqueeze()
    if mode == "fixed":
        sqz = InternalSqueeze(mode="fixed",
                              r=rng.uniform(-0.8, 0.8) * r_cap,
                              theta=rng.uniform(0.0, math.pi))
    return IfoConfig(
        L=rng.uniform(1e3, 1e4),
        M=rng.uniform(10.0, 200.0),
        P=10.0 ** rng.uniform(4.0, 6.3),
        omega0=TWO_PI * 299792458.0 / rng.uniform(0.5e-6, 1.6e-6),
        T_itm=rng.uniform(0.005, 0.05),
        T_src=t_src,
        eps_arm=rng.uniform(0.0, 3e-4) if with_losses else 0.0,
        eps_src_channels=(rng.uniform(0.0, 3e-3) if with_losses else 0.0,),
        eps_ext=rng.uniform(0.0, 0.3) if with_losses else 0.0,
        r_input=rng.uniform(0.0, 2.0),
        theta_input=rng.uniform(0.0, TWO_PI),
        internal_sqz=sqz,
        Theta=rng.uniform(-0.3, 0.3),
    )


def _check_symplectic(rng) -> CheckResult:
    j = SYMPLECTIC_FORM
    worst = 0.0
    for _ in range(200):
        mats = [
            rotation_matrix(rng.uniform(-10.0, 10.0)),
            squeeze_matrix(rng.uniform(-2.0, 2.0), rng.uniform(0.0, TWO_PI)),
            ponderomotive_matrix(10.0 ** rng.uniform(-3.0, 2.0)),
        ]
        for m in mats:
            worst = max(worst, float(np.abs(m @ j @ m.T - j).max()))
    return CheckResult("symplectic", worst, 1e-12)


def _check_decomposition(rng) -> CheckResult:
    worst = 0.0
    for gain in np.geomspace(1e-3, 1e3, 61):
        phi, p = ponderomotive_decompose(gain)
        recomposed = squeeze_matrix(p.r, p.theta) @ rotation_matrix(phi)
        worst = max(worst, float(np.abs(recomposed
                                        - ponderomotive_matrix(gain)).max()))
    return CheckResult("decomposition_roundtrip", worst, 1e-10)


def _check_optimal_vs_grid(cfg, rng) -> CheckResult:
    zetas = (np.arange(4000) + 0.5) * math.pi / 4000
    worst = 0.0
    for f in (12.0, 110.0, 980.0):
        omega = TWO_PI * f
        s_opt, _ = ifo.optimal_spectrum(cfg, omega)
        grid_min = float(np.min(ifo.homodyne_spectrum(cfg, omega, zetas)))
        worst = max(worst, abs(grid_min - s_opt) / s_opt)
    return CheckResult("optimal_vs_grid", worst, 1e-3)


def _check_monotonicity(rng) -> CheckResult:
    worst = 0.0
    for _ in range(20):
        cfg = random_config(rng)
        omega = TWO_PI * 10.0 ** rng.uniform(math.log10(5.0), math.log10(5e3))
        s0 = ifo.optimal_spectrum(cfg, omega)[0]
        field = rng.choice(["eps_arm", "eps_ext", "eps_src"])
        if field == "eps_src":
            base = cfg.eps_src_channels[0]
            bumped = replace(cfg, eps_src_channels=(base + rng.uniform(0.0, 2e-3),))
        else:
            base = getattr(cfg, field)
            bumped = replace(cfg, **{field: base + rng.uniform(0.0, 0.1 * (1 - base))})
        s1 = ifo.optimal_spectrum(bumped, omega)[0]
        worst = max(worst, max(0.0, (s0 - s1) / s0))
    return CheckResult("loss_monotonicity", worst, 1e-12)


def _check_fdt(cfg) -> CheckResult:
    if cfg.eps_arm == 0.0:
        return CheckResult("fdt_vs_loss_limit", 0.0, 1e-3)
    arm_only = replace(cfg, eps_src_channels=(0.0,), eps_ext=0.0)
    worst = 0.0
    for f in np.geomspace(5.0, 5000.0, 25):
        omega = TWO_PI * f
        closed = limits.loss_limit(arm_only, omega, limits.ALPHA_NO_INTERNAL)
        oracle = fdt.loss_floor_fdt(arm_only, omega)
        worst = max(worst, abs(oracle - closed) / closed)
    return CheckResult("fdt_vs_loss_limit", worst, 1e-3)


def _taylor_regime(cfg) -> IfoConfig:
    return replace(cfg, T_src=1e-3, Theta=0.0, r_input=0.0, theta_input=0.0,
                   internal_sqz=InternalSqueeze(), residual_phase=0.0)


def _check_taylor_vs_exact(cfg) -> CheckResult:
    small = _taylor_regime(cfg)
    lossless = replace(small, eps_arm=0.0, eps_src_channels=(0.0,), eps_ext=0.0)
    worst = 0.0
    for f in (12.0, 110.0, 980.0):
        omega = TWO_PI * f
        exact_qcrb = ifo.optimal_spectrum(lossless, omega)[0]
        shot = limits.taylor_qcrb_no_internal(small.T_src, 0.0, 0.0,
                                              small.L, small.omega0, small.P)
        worst = max(worst, abs(exact_qcrb - shot) / shot)
        loss_exact = (ifo.optimal_spectrum(small, omega)[0] - exact_qcrb)
        loss_taylor = limits.taylor_loss_no_internal(small, omega)
        worst = max(worst, abs(loss_exact - loss_taylor) / loss_taylor)
    return CheckResult("taylor_vs_exact", worst, 1e-2)


def _check_first_order_split(cfg) -> CheckResult:
    small = _taylor_regime(cfg)
    worst = 0.0
    for f in (12.0, 110.0, 980.0):
        omega = TWO_PI * f
        s_full = ifo.optimal_spectrum(small, omega)[0]
        split = (ifo.qcrb_lossless(small, omega)
                 + limits.loss_limit(small, omega, limits.ALPHA_NO_INTERNAL))
        worst = max(worst, abs(s_full - split) / s_full)
    return CheckResult("first_order_split", worst, 5e-2)


def run_validation(cfg: IfoConfig, seed: int = 42) -> ValidationReport:
    """Run the cross-check suite against a configuration."""
    rng = np.random.default_rng(seed)
    checks = (
        _check_symplectic(rng),
        _check_decomposition(rng),
        _check_optimal_vs_grid(cfg, rng),
        _check_monotonicity(rng),
        _check_fdt(cfg),
        _check_taylor_vs_exact(cfg),
        _check_first_order_split(cfg),
    )
    return ValidationReport(config_sha256=config_hash(cfg), seed=seed,
                            checks=checks)
