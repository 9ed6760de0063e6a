"""Solver SDP denso de punto interior primal-dual.

Resuelve problemas pequenos en forma LMI

    min c^T x   s.a.   F_b(x) = F0_b + sum_i x_i F_i,b >= 0   (cada bloque b)

junto con su dual

    max -sum_b Tr(F0_b Z_b)   s.a.   sum_b Tr(F_i,b Z_b) = c_i,   Z_b >= 0.

Metodo: seguimiento de camino con direccion HKM (Helmberg-Kojima-Monteiro),
predictor-corrector de Mehrotra y arranque no factible desde S = Z = zeta * 1.
El punto inicial no necesita ser factible: los residuos primal y dual decrecen
en proporcion a los pasos aceptados. Los problemas no factibles o no acotados
se detectan por divergencia de Tr(Z) o de |x| respectivamente.
"""
import logging
from dataclasses import replace
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import linalg

from ..config.settings import Config
from ..models.sdp_models import SdpProblem, SdpSettings, SdpSolution, SolverStatus

logger = logging.getLogger(__name__)

DIVERGENCE_LIMIT = 1e10
# Iteraciones extra tras alcanzar la tolerancia para que x se estabilice
POLISH_ITERATIONS = 6
MU_FLOOR = 1e-15


def _sym(matrix: np.ndarray) -> np.ndarray:
    return 0.5 * (matrix + matrix.T)


def _max_step(current: np.ndarray, direction: np.ndarray) -> float:
    """Mayor alpha con current + alpha * direction >= 0 (current definida positiva)"""
    factor = np.linalg.cholesky(current)
    inverse = linalg.solve_triangular(factor, np.eye(current.shape[0]), lower=True)
    scaled = _sym(inverse @ direction @ inverse.T)
    lowest = np.linalg.eigvalsh(scaled).min()
    if lowest >= 0:
        return np.inf
    return -1.0 / lowest


class SdpSolver:
    """Metodo de punto interior para bloques densos pequenos (<= 8x8)"""

    def __init__(self, settings: Optional[SdpSettings] = None):
        self.settings = settings or SdpSettings(
            tol=Config.SDP_TOL,
            max_iter=Config.SDP_MAX_ITER,
            step_fraction=Config.SDP_STEP_FRACTION,
        )

    # ==================== SOLVER ====================

    def solve(self, problem: SdpProblem, settings: Optional[SdpSettings] = None) -> SdpSolution:
        """Resuelve el problema y devuelve la solucion con su brecha de dualidad

        Args:
            problem: Problema en forma LMI por bloques
            settings: Tolerancia, iteraciones maximas y fraccion de paso

        Returns:
            SdpSolution con estado Optimal, MaxIterations, Infeasible o Unbounded
        """
        settings = settings or self.settings
        c = problem.objective
        m = problem.num_vars
        f0s = [block.f0 for block in problem.lmi_blocks]
        fis = [np.stack(block.coefficients) for block in problem.lmi_blocks]
        total_dim = sum(block.size for block in problem.lmi_blocks)

        data_scale = max(
            1.0,
            max(np.abs(f).max() for f in f0s),
            max(np.abs(f).max() for f in fis),
            np.abs(c).max() if m else 0.0,
        )
        zeta = 10.0 * data_scale
        x = np.zeros(m)
        slacks = [zeta * np.eye(f.shape[0]) for f in f0s]
        duals = [zeta * np.eye(f.shape[0]) for f in f0s]
        f0_norm = 1.0 + max(np.linalg.norm(f) for f in f0s)
        c_norm = 1.0 + np.linalg.norm(c)

        best: Optional[Tuple[float, SdpSolution]] = None
        converged: Optional[SdpSolution] = None
        polish_left = POLISH_ITERATIONS

        for iteration in range(settings.max_iter):
            primal_res = [f0 + np.tensordot(x, fi, axes=1) - s
                          for f0, fi, s in zip(f0s, fis, slacks)]
            dual_res = c - sum(np.einsum('ikl,lk->i', fi, z) for fi, z in zip(fis, duals))
            complementarity = sum(np.trace(s @ z) for s, z in zip(slacks, duals))
            mu = complementarity / total_dim

            primal_value = float(c @ x)
            dual_value = float(-sum(np.trace(f0 @ z) for f0, z in zip(f0s, duals)))
            gap = abs(primal_value - dual_value)
            pinf = max(np.linalg.norm(r) for r in primal_res) / f0_norm
            dinf = np.linalg.norm(dual_res) / c_norm

            logger.debug(
                'iter %3d  primal %.10e  dual %.10e  gap %.2e  pinf %.2e  dinf %.2e',
                iteration, primal_value, dual_value, gap, pinf, dinf,
            )

            candidate = SdpSolution(
                status=SolverStatus.MAX_ITERATIONS, x=x.copy(),
                primal_value=primal_value, dual_value=dual_value, gap=gap,
                iterations=iteration, dual_blocks=tuple(z.copy() for z in duals),
            )
            merit = max(pinf, dinf, gap / max(1.0, abs(primal_value)))
            if best is None or merit < best[0]:
                best = (merit, candidate)

            # Criterio absoluto: brecha y residuos LMI evaluados en F(x), no en S
            lmi_min = min(np.linalg.eigvalsh(f0 + np.tensordot(x, fi, axes=1)).min()
                          for f0, fi in zip(f0s, fis))
            if (gap <= settings.tol and lmi_min >= -settings.tol
                    and dinf <= settings.tol and complementarity <= settings.tol):
                converged = replace(candidate, status=SolverStatus.OPTIMAL)
                if polish_left == 0 or mu <= MU_FLOOR * data_scale:
                    break
                polish_left -= 1
            elif converged is not None:
                # el pulido perdio la tolerancia: se conserva el ultimo iterado valido
                break

            if converged is None and sum(np.trace(z) for z in duals) > DIVERGENCE_LIMIT:
                logger.info('SDP no factible: Tr(Z) diverge en la iteracion %d', iteration)
                return replace(candidate, status=SolverStatus.INFEASIBLE)
            if converged is None and np.abs(x).max(initial=0.0) > DIVERGENCE_LIMIT:
                logger.info('SDP no acotado: |x| diverge en la iteracion %d', iteration)
                return replace(candidate, status=SolverStatus.UNBOUNDED)

            try:
                x, slacks, duals = self._newton_step(
                    x, slacks, duals, fis, primal_res, dual_res, mu, settings.step_fraction
                )
            except (np.linalg.LinAlgError, linalg.LinAlgError) as e:
                logger.log(logging.DEBUG if converged is not None else logging.WARNING,
                           'Fallo numerico en la iteracion %d: %s', iteration, e)
                break

        if converged is not None:
            logger.info('SDP optimo en %d iteraciones, valor %.12g, brecha %.2e',
                        converged.iterations, converged.primal_value, converged.gap)
            return converged
        logger.info('SDP sin convergencia tras %d iteraciones', settings.max_iter)
        return best[1]

    def _newton_step(self, x, slacks, duals, fis, primal_res, dual_res, mu, step_fraction):
        """Paso predictor-corrector con direccion HKM"""
        m = x.shape[0]
        inverses = [linalg.cho_solve(linalg.cho_factor(s), np.eye(s.shape[0])) for s in slacks]

        schur = np.zeros((m, m))
        for fi, sinv, z in zip(fis, inverses, duals):
            products = np.einsum('kl,ilm,mn->ikn', sinv, fi, z)
            schur += np.einsum('ikl,jlk->ij', fi, products)
        schur = _sym(schur)
        try:
            schur_factor = linalg.cho_factor(schur)

            def solve_schur(rhs):
                return linalg.cho_solve(schur_factor, rhs)
        except linalg.LinAlgError:
            def solve_schur(rhs):
                return np.linalg.lstsq(schur, rhs, rcond=None)[0]

        def direction(targets):
            # targets[b] = S^-1 (sigma mu 1 - correccion) por bloque
            rhs = -dual_res.copy()
            for fi, sinv, z, rp, k in zip(fis, inverses, duals, primal_res, targets):
                rhs += np.einsum('ikl,lk->i', fi, k - z - sinv @ rp @ z)
            dx = solve_schur(rhs)
            ds = [rp + np.tensordot(dx, fi, axes=1) for rp, fi in zip(primal_res, fis)]
            dz = [_sym(k - z - sinv @ d @ z)
                  for k, z, sinv, d in zip(targets, duals, inverses, ds)]
            return dx, ds, dz

        def step_lengths(ds, dz):
            alpha_p = min(_max_step(s, d) for s, d in zip(slacks, ds))
            alpha_d = min(_max_step(z, d) for z, d in zip(duals, dz))
            return min(1.0, step_fraction * alpha_p), min(1.0, step_fraction * alpha_d)

        # Predictor (sigma = 0)
        zero = [np.zeros_like(s) for s in slacks]
        dx_a, ds_a, dz_a = direction(zero)
        alpha_p, alpha_d = step_lengths(ds_a, dz_a)
        total_dim = sum(s.shape[0] for s in slacks)
        mu_aff = sum(np.trace((s + alpha_p * d) @ (z + alpha_d * e))
                     for s, d, z, e in zip(slacks, ds_a, duals, dz_a)) / total_dim
        sigma = float(np.clip((mu_aff / mu) ** 3, 0.0, 1.0)) if mu > 0 else 0.0

        # Corrector con termino de segundo orden de Mehrotra
        targets = [sinv @ (sigma * mu * np.eye(s.shape[0]) - d @ e)
                   for sinv, s, d, e in zip(inverses, slacks, ds_a, dz_a)]
        dx, ds, dz = direction(targets)
        alpha_p, alpha_d = step_lengths(ds, dz)

        x = x + alpha_p * dx
        slacks = [_sym(s + alpha_p * d) for s, d in zip(slacks, ds)]
        duals = [_sym(z + alpha_d * d) for z, d in zip(duals, dz)]
        return x, slacks, duals

    # ==================== CERTIFICADOS ====================

    def kkt_residuals(self, problem: SdpProblem, sol: SdpSolution) -> Dict[str, float]:
        """Residuos de factibilidad primal, dual y de holgura complementaria"""
        values = [block.evaluate(sol.x) for block in problem.lmi_blocks]
        primal = max(0.0, -min(np.linalg.eigvalsh(v).min() for v in values))
        if len(sol.dual_blocks) != len(values):
            return {'primal': primal, 'dual': np.inf, 'complementarity': np.inf}
        operator = np.zeros(problem.num_vars)
        dual_cone = 0.0
        complementarity = 0.0
        for block, z, value in zip(problem.lmi_blocks, sol.dual_blocks, values):
            operator += np.array([np.trace(fi @ z) for fi in block.coefficients])
            dual_cone = max(dual_cone, -np.linalg.eigvalsh(z).min())
            complementarity += np.trace(value @ z)
        dual = max(np.abs(problem.objective - operator).max(initial=0.0), dual_cone)
        return {'primal': float(primal), 'dual': float(dual),
                'complementarity': float(abs(complementarity))}

    def check_kkt(self, problem: SdpProblem, sol: SdpSolution, tol: float) -> bool:
        residuals = self.kkt_residuals(problem, sol)
        return all(value <= tol for value in residuals.values())


# Instancia global
sdp_solver = SdpSolver()
