"""Busquedas numericas: seccion aurea y rejilla con pulido local."""
import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np
from scipy.optimize import minimize, minimize_scalar

PHI_RATIO = 2 / (1 + math.sqrt(5))


def golden_section(f: Callable[[np.ndarray], np.ndarray], lower, upper,
                   iterations: int = 200) -> Tuple[np.ndarray, np.ndarray]:
    """Minimiza f convexa en [lower, upper] por seccion aurea

    Admite arreglos: lower y upper pueden tener cualquier forma y f se evalua
    elemento a elemento, de modo que muchos problemas 1-D avanzan a la vez.

    Returns:
        (argmin, minimum) con la forma de lower/upper
    """
    x_l = np.array(lower, dtype=float)
    x_u = np.array(upper, dtype=float)
    x1 = x_u - PHI_RATIO * (x_u - x_l)
    x2 = x_l + PHI_RATIO * (x_u - x_l)
    f1 = f(x1)
    f2 = f(x2)
    for _ in range(iterations):
        left = f2 > f1
        x_u = np.where(left, x2, x_u)
        x_l = np.where(left, x_l, x1)
        x2_new = np.where(left, x1, x_l + PHI_RATIO * (x_u - x_l))
        x1_new = np.where(left, x_u - PHI_RATIO * (x_u - x_l), x2)
        f_new = f(np.where(left, x1_new, x2_new))
        f1, f2 = np.where(left, f_new, f2), np.where(left, f1, f_new)
        x1, x2 = x1_new, x2_new

    # Los extremos pueden ser el minimo (funcion monotona en el intervalo)
    candidates = np.stack([np.array(lower, dtype=float), np.array(upper, dtype=float), x1, x2])
    values = np.stack([f(candidates[0]), f(candidates[1]), f1, f2])
    best = np.argmin(values, axis=0)
    argmin = np.take_along_axis(candidates, best[None, ...], axis=0)[0]
    minimum = np.take_along_axis(values, best[None, ...], axis=0)[0]
    return argmin, minimum


@dataclass(frozen=True)
class StripMinimum:
    value: float
    z: float
    x: float
    evaluations: int


class StripSearch:
    """Minimiza f(z, x) sobre {z_lo <= z <= z_hi, |x| <= x_max(z)}

    Etapa global: rejilla grid_n x grid_n en (z, u) con x = u * x_max(z).
    Etapa local: Nelder-Mead desde los mejores puntos de la rejilla y
    busqueda 1-D sobre los bordes u = -1, 0, 1, donde suelen quedar los
    optimos (fronteras de las restricciones matriciales y estrategia conmutativa).
    Empates: menor valor, luego (z, x) lexicografico.
    """

    def __init__(self, objective: Callable[[np.ndarray, np.ndarray], np.ndarray],
                 z_lo: float, z_hi: float, x_max: Callable[[np.ndarray], np.ndarray],
                 grid_n: int, starts: int = 3):
        self.objective = objective
        self.z_lo = z_lo
        self.z_hi = z_hi
        self.x_max = x_max
        self.grid_n = grid_n
        self.starts = starts
        self.evaluations = 0

    def _evaluate(self, z, u) -> np.ndarray:
        z = np.clip(np.asarray(z, dtype=float), self.z_lo, self.z_hi)
        u = np.clip(np.asarray(u, dtype=float), -1.0, 1.0)
        self.evaluations += int(np.size(z))
        return self.objective(z, u * self.x_max(z))

    def _scalar(self, point) -> float:
        return float(self._evaluate(np.array([point[0]]), np.array([point[1]]))[0])

    def _record(self, best, value, z, u):
        z = min(max(z, self.z_lo), self.z_hi)
        u = min(max(u, -1.0), 1.0)
        x = float(u * self.x_max(np.array([z]))[0])
        candidate = (value, z, x)
        if best is None or candidate < best:
            return candidate
        return best

    def run(self) -> StripMinimum:
        zs = np.linspace(self.z_lo, self.z_hi, self.grid_n)
        us = np.union1d(np.linspace(-1.0, 1.0, self.grid_n), [0.0])
        grid_z, grid_u = np.meshgrid(zs, us, indexing='ij')
        values = self._evaluate(grid_z, grid_u)

        flat_z, flat_u, flat_v = grid_z.ravel(), grid_u.ravel(), values.ravel()
        flat_x = flat_u * self.x_max(flat_z)
        order = np.lexsort((flat_x, flat_z, flat_v))
        best = None
        for index in order[:1]:
            best = self._record(best, float(flat_v[index]), flat_z[index], flat_u[index])

        dz = (self.z_hi - self.z_lo) / max(self.grid_n - 1, 1)
        du = 2.0 / max(self.grid_n - 1, 1)
        for index in order[:self.starts]:
            start = np.array([flat_z[index], flat_u[index]])
            simplex = np.array([start, start + [dz, 0.0], start + [0.0, du]])
            result = minimize(self._scalar, start, method='Nelder-Mead', options={
                'initial_simplex': simplex, 'xatol': 1e-13, 'fatol': 1e-15, 'maxiter': 4000,
            })
            best = self._record(best, float(result.fun), result.x[0], result.x[1])

        for edge in (-1.0, 0.0, 1.0):
            line_z = np.linspace(self.z_lo, self.z_hi, 4 * self.grid_n + 1)
            line_values = self._evaluate(line_z, np.full_like(line_z, edge))
            k = int(np.argmin(line_values))
            best = self._record(best, float(line_values[k]), line_z[k], edge)
            lo = line_z[max(k - 1, 0)]
            hi = line_z[min(k + 1, line_z.size - 1)]
            if hi > lo:
                result = minimize_scalar(
                    lambda z: self._scalar((z, edge)), bounds=(lo, hi),
                    method='bounded', options={'xatol': 1e-14},
                )
                best = self._record(best, float(result.fun), float(result.x), edge)

        value, z, x = best
        return StripMinimum(value=value, z=z, x=x, evaluations=self.evaluations)
