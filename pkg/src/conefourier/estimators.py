"""scikit-learn style wrappers around the radial and cone transforms.

Rows of ``X`` are samples of radial functions on a log-uniform grid
``exp(x_min + i dx)``, ``i < n_points``.  Every transform here is a unitary
involution, so ``inverse_transform`` applies the same map again.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from . import radial
from .radial import RadialFn, RadialGrid, SectorIndex, Signature

__all__ = ["SectorTransform", "FoxTransform", "ConeInversion"]


class _GridTransformer(TransformerMixin, BaseEstimator):
    def _grid(self) -> RadialGrid:
        return RadialGrid(self.x_min, self.x_max, self.n_points)

    def _validate(self, X, reset: bool):
        X = check_array(X, dtype=float)
        if reset:
            self.n_features_in_ = X.shape[1]
        elif X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} columns, got {X.shape[1]}")
        return X

    def fit(self, X, y=None):
        self._setup()
        X = self._validate(X, reset=True)
        if X.shape[1] != self.n_expected_:
            raise ValueError(f"rows must hold {self.n_expected_} samples")
        return self

    def transform(self, X):
        check_is_fitted(self, "grid_")
        X = self._validate(X, reset=False)
        return np.vstack([self._apply_row(row) for row in X])

    def inverse_transform(self, X):
        # outputs decay only like r toward the origin, so the edge guard is off
        check_is_fitted(self, "grid_")
        X = self._validate(X, reset=False)
        return np.vstack([self._apply_row(row, relaxed=True) for row in X])


class SectorTransform(_GridTransformer):
    """The radial inversion ``T_{l,k}`` of one harmonic sector.

    Parameters
    ----------
    p, q : int
        Signature of the cone.
    l, k : int
        Sector bidegree.
    method : {'multiplier', 'direct'}
    x_min, x_max, n_points :
        Log-radius grid.
    edge_tol : float or None
        Decay guard passed to the multiplier route.

    Examples
    --------
    >>> import numpy as np
    >>> est = SectorTransform(p=3, q=3, n_points=1024)
    >>> r = np.exp(np.linspace(-14, 7, 1024, endpoint=False))
    >>> Y = est.fit_transform(np.exp(-r)[None, :] * r)
    >>> Y.shape
    (1, 1024)
    """

    def __init__(self, p=3, q=3, l=0, k=0, method="multiplier",
                 x_min=-14.0, x_max=7.0, n_points=4096, edge_tol=1e-10):
        self.p, self.q, self.l, self.k = p, q, l, k
        self.method = method
        self.x_min, self.x_max, self.n_points = x_min, x_max, n_points
        self.edge_tol = edge_tol

    def _setup(self):
        if self.method not in ("multiplier", "direct"):
            raise ValueError("method must be 'multiplier' or 'direct'")
        self.signature_ = Signature(self.p, self.q)
        self.sector_ = SectorIndex(self.l, self.k)
        self.grid_ = self._grid()
        self.n_expected_ = self.n_points
        self.eigenvalue_ = radial.eigenvalue(self.signature_, self.sector_)

    def _prepared(self) -> "SectorTransform":
        self._setup()
        return self

    def _apply_row(self, row, relaxed=False):
        f = RadialFn(self.grid_, self.signature_, row)
        if self.method == "direct":
            return radial.t_lk_direct(f, self.sector_).values
        tol = None if relaxed else self.edge_tol
        return radial.t_lk_multiplier(f, self.sector_, edge_tol=tol).values

    def eigenvector(self) -> np.ndarray:
        """Samples of the closed-form eigenfunction on the fitted grid."""
        check_is_fitted(self, "grid_")
        return radial.f_lk(self.signature_, self.sector_)(self.grid_.r)


class FoxTransform(_GridTransformer):
    """Fox's G-function transform on ``L^2(R_+, dy)``.

    Parameters
    ----------
    b1, b2, gamma : float
        Half-integer parameters; see :func:`conefourier.radial.fox_g_transform`.
    method : {'multiplier', 'direct'}
    x_min, x_max, n_points :
        Log grid; if ``x_min`` is None the grid from
        :func:`conefourier.radial.fox_grid` is used.
    """

    def __init__(self, b1=0.0, b2=0.0, gamma=1.0, method="multiplier",
                 x_min=None, x_max=7.0, n_points=4096):
        self.b1, self.b2, self.gamma = b1, b2, gamma
        self.method = method
        self.x_min, self.x_max, self.n_points = x_min, x_max, n_points

    def _setup(self):
        radial._check_fox(self.b1, self.b2, self.gamma)
        if self.x_min is None:
            self.grid_ = radial.fox_grid(self.gamma, RadialGrid(N=self.n_points))
        else:
            self.grid_ = self._grid()
        self.n_expected_ = self.grid_.N

    def _apply_row(self, row, relaxed=False):
        return radial.fox_g_transform(self.b1, self.b2, self.gamma, row, self.grid_, method=self.method)


class ConeInversion(_GridTransformer):
    """The cone transform ``F_C`` on functions given by finitely many sectors.

    A row concatenates the radial coefficients of ``sectors`` in order, each
    sampled on the same grid; the angular parts are untouched by ``F_C``.

    Parameters
    ----------
    p, q : int
    sectors : sequence of (l, k)
    method : {'multiplier', 'direct'}
    x_min, x_max, n_points :
    edge_tol : float or None
    """

    def __init__(self, p=3, q=3, sectors=((0, 0),), method="multiplier",
                 x_min=-14.0, x_max=7.0, n_points=4096, edge_tol=1e-10):
        self.p, self.q, self.sectors = p, q, sectors
        self.method = method
        self.x_min, self.x_max, self.n_points = x_min, x_max, n_points
        self.edge_tol = edge_tol

    def _setup(self):
        sig = Signature(self.p, self.q)
        idx = [SectorIndex(int(l), int(k)) for l, k in self.sectors]
        if len(set(idx)) != len(idx):
            raise ValueError("duplicate sectors")
        if sig.q == 2 and any(s.k > 1 for s in idx):
            raise ValueError("q = 2 admits only k <= 1")
        self.blocks_ = [SectorTransform(self.p, self.q, s.l, s.k, self.method, self.x_min,
                                        self.x_max, self.n_points, self.edge_tol)._prepared()
                        for s in idx]
        self.grid_ = self._grid()
        self.n_expected_ = self.n_points * len(idx)

    def _apply_row(self, row, relaxed=False):
        parts = np.split(row, len(self.blocks_))
        return np.concatenate([b._apply_row(v, relaxed) for b, v in zip(self.blocks_, parts)])

    def sector_norms(self, X) -> np.ndarray:
        """Norms of each sector block, shape ``(n_samples, n_sectors)``."""
        check_is_fitted(self, "grid_")
        X = self._validate(X, reset=False)
        sig = Signature(self.p, self.q)
        out = np.empty((X.shape[0], len(self.blocks_)))
        for i, row in enumerate(X):
            for j, v in enumerate(np.split(row, len(self.blocks_))):
                out[i, j] = RadialFn(self.grid_, sig, v).norm()
        return out
