"""Second-order forward-mode differentiation for scalar and array quantities.

A :class:`Jet` carries a value together with its gradient and (optionally) its
Hessian with respect to a fixed set of ``nvars`` seed variables.  Derivative axes
are trailing: a jet whose value has shape ``S`` stores ``grad`` with shape
``S + (nvars,)`` and ``hess`` with shape ``S + (nvars, nvars)``.  Order-1 jets
leave ``hess`` as ``None`` and skip the second-order bookkeeping entirely.

Every operation is exact to roundoff; there is no step size anywhere.
"""

from __future__ import annotations

from typing import Any, Callable, Iterable, Sequence

import numpy as np

__all__ = [
    "Jet",
    "seed",
    "constant",
    "stack",
    "block_diag",
    "value",
    "gradient",
    "hessian",
    "exp",
    "log",
    "sqrt",
    "sin",
    "cos",
    "sinh",
    "cosh",
]


class Jet:
    """Truncated multivariate Taylor expansion of an array-valued quantity."""

    __slots__ = ("val", "grad", "hess")

    # numpy defers to the reflected operators below (ndarray @ Jet, 2.0 * Jet, ...)
    __array_ufunc__ = None

    def __init__(self, val: Any, grad: Any, hess: Any = None) -> None:
        self.val = np.asarray(val)
        self.grad = np.asarray(grad)
        self.hess = None if hess is None else np.asarray(hess)

    # -- introspection -------------------------------------------------

    @property
    def shape(self) -> tuple[int, ...]:
        return self.val.shape

    @property
    def ndim(self) -> int:
        return self.val.ndim

    @property
    def nvars(self) -> int:
        return self.grad.shape[-1]

    @property
    def order(self) -> int:
        return 1 if self.hess is None else 2

    def __len__(self) -> int:
        return len(self.val)

    def __repr__(self) -> str:
        return f"Jet(shape={self.shape}, nvars={self.nvars}, order={self.order})"

    # -- structural operations ------------------------------------------

    def __getitem__(self, index: Any) -> "Jet":
        hess = None if self.hess is None else self.hess[index]
        return Jet(self.val[index], self.grad[index], hess)

    def reshape(self, *shape: Any) -> "Jet":
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        target = np.empty(self.shape).reshape(shape).shape
        n = self.nvars
        hess = None if self.hess is None else self.hess.reshape(target + (n, n))
        return Jet(self.val.reshape(target), self.grad.reshape(target + (n,)), hess)

    def transpose(self) -> "Jet":
        k = self.ndim
        axes = tuple(reversed(range(k)))
        hess = None if self.hess is None else self.hess.transpose(axes + (k, k + 1))
        return Jet(self.val.transpose(axes), self.grad.transpose(axes + (k,)), hess)

    @property
    def T(self) -> "Jet":
        return self.transpose()

    def sum(self, axis: int | None = None) -> "Jet":
        n = self.nvars
        if axis is None:
            hess = None if self.hess is None else self.hess.reshape(-1, n, n).sum(axis=0)
            return Jet(self.val.sum(), self.grad.reshape(-1, n).sum(axis=0), hess)
        axis = axis % self.ndim
        hess = None if self.hess is None else self.hess.sum(axis=axis)
        return Jet(self.val.sum(axis=axis), self.grad.sum(axis=axis), hess)

    def trace(self) -> "Jet":
        hess = None if self.hess is None else np.trace(self.hess, axis1=0, axis2=1)
        return Jet(np.trace(self.val), np.trace(self.grad, axis1=0, axis2=1), hess)

    def conj(self) -> "Jet":
        hess = None if self.hess is None else np.conj(self.hess)
        return Jet(np.conj(self.val), np.conj(self.grad), hess)

    @property
    def real(self) -> "Jet":
        hess = None if self.hess is None else self.hess.real
        return Jet(self.val.real, self.grad.real, hess)

    @property
    def imag(self) -> "Jet":
        hess = None if self.hess is None else self.hess.imag
        return Jet(self.val.imag, self.grad.imag, hess)

    # -- arithmetic -------------------------------------------------------

    def __neg__(self) -> "Jet":
        hess = None if self.hess is None else -self.hess
        return Jet(-self.val, -self.grad, hess)

    def __pos__(self) -> "Jet":
        return self

    def __add__(self, other: Any) -> "Jet":
        if not isinstance(other, Jet):
            val = self.val + np.asarray(other)
            n = self.nvars
            grad = np.broadcast_to(self.grad, val.shape + (n,))
            hess = (
                None if self.hess is None else np.broadcast_to(self.hess, val.shape + (n, n))
            )
            return Jet(val, grad, hess)
        hess = None
        if self.hess is not None and other.hess is not None:
            hess = self.hess + other.hess
        return Jet(self.val + other.val, self.grad + other.grad, hess)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "Jet":
        if isinstance(other, Jet):
            return self + (-other)
        return self + np.negative(np.asarray(other))

    def __rsub__(self, other: Any) -> "Jet":
        return (-self) + other

    def __mul__(self, other: Any) -> "Jet":
        if not isinstance(other, Jet):
            c = np.asarray(other)
            hess = None if self.hess is None else self.hess * c[..., None, None]
            return Jet(self.val * c, self.grad * c[..., None], hess)
        av, bv = self.val, other.val
        ag, bg = self.grad, other.grad
        grad = av[..., None] * bg + bv[..., None] * ag
        hess = None
        if self.hess is not None and other.hess is not None:
            cross = ag[..., :, None] * bg[..., None, :]
            hess = (
                av[..., None, None] * other.hess
                + bv[..., None, None] * self.hess
                + cross
                + np.swapaxes(cross, -1, -2)
            )
        return Jet(av * bv, grad, hess)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "Jet":
        if not isinstance(other, Jet):
            return self * (1.0 / np.asarray(other))
        return self * _reciprocal(other)

    def __rtruediv__(self, other: Any) -> "Jet":
        return _reciprocal(self) * np.asarray(other)

    def __pow__(self, exponent: float) -> "Jet":
        if isinstance(exponent, Jet):
            raise TypeError("Jet exponents must be plain numbers")
        p = float(exponent)
        if p == 0.0:
            return constant(np.ones_like(self.val), self.nvars, order=self.order)
        if p == 1.0:
            return self
        if p == 2.0:
            return self * self
        v = self.val
        return _chain(self, v**p, p * v ** (p - 1.0), p * (p - 1.0) * v ** (p - 2.0))

    def __matmul__(self, other: Any) -> "Jet":
        return _matmul(self, other)

    def __rmatmul__(self, other: Any) -> "Jet":
        return _matmul(other, self)


def seed(point: Sequence[float] | np.ndarray, *, order: int = 2) -> Jet:
    """Return the identity jet at *point*: each entry is one independent variable."""

    val = np.asarray(point, dtype=float)
    if val.ndim != 1:
        raise ValueError("seed expects a one-dimensional point")
    n = val.shape[0]
    hess = np.zeros((n, n, n)) if order >= 2 else None
    return Jet(val.copy(), np.eye(n), hess)


def constant(val: Any, nvars: int, *, order: int = 2) -> Jet:
    """Return a jet with value *val* and vanishing derivatives."""

    arr = np.asarray(val)
    grad = np.zeros(arr.shape + (nvars,), dtype=arr.dtype if arr.dtype.kind == "c" else float)
    hess = None
    if order >= 2:
        hess = np.zeros(arr.shape + (nvars, nvars), dtype=grad.dtype)
    return Jet(arr, grad, hess)


def stack(items: Iterable[Any], axis: int = 0) -> Jet:
    """Stack jets (or constants) along a new value *axis*; plain inputs give an ndarray."""

    items = list(items)
    template = next((item for item in items if isinstance(item, Jet)), None)
    if template is None:
        return np.stack([np.asarray(item) for item in items], axis=axis)
    nvars = template.nvars
    order = min(item.order for item in items if isinstance(item, Jet))
    jets = [item if isinstance(item, Jet) else constant(item, nvars, order=order) for item in items]
    ndim = jets[0].ndim + 1
    axis = axis % ndim
    hess = None
    if order >= 2:
        hess = np.stack([jet.hess for jet in jets], axis=axis)
    return Jet(
        np.stack([jet.val for jet in jets], axis=axis),
        np.stack([jet.grad for jet in jets], axis=axis),
        hess,
    )


def block_diag(*blocks: Any) -> Any:
    """Assemble square blocks (jets or constants) into a block-diagonal matrix."""

    sizes = [value(block).shape[0] for block in blocks]
    total = sum(sizes)
    template = next((block for block in blocks if isinstance(block, Jet)), None)
    dtype = np.result_type(*(value(block) for block in blocks))
    val = np.zeros((total, total), dtype=dtype)
    if template is None:
        offset = 0
        for block, size in zip(blocks, sizes):
            val[offset : offset + size, offset : offset + size] = block
            offset += size
        return val

    n = template.nvars
    order = min(block.order for block in blocks if isinstance(block, Jet))
    grad = np.zeros((total, total, n), dtype=dtype)
    hess = np.zeros((total, total, n, n), dtype=dtype) if order >= 2 else None
    offset = 0
    for block, size in zip(blocks, sizes):
        window = slice(offset, offset + size)
        val[window, window] = value(block)
        if isinstance(block, Jet):
            grad[window, window] = block.grad
            if hess is not None:
                hess[window, window] = block.hess
        offset += size
    return Jet(val, grad, hess)


def value(x: Any) -> np.ndarray:
    """Return the plain value of *x* (jets are unwrapped)."""

    return x.val if isinstance(x, Jet) else np.asarray(x)


def gradient(x: Any, nvars: int) -> np.ndarray:
    if isinstance(x, Jet):
        return x.grad
    arr = np.asarray(x)
    return np.zeros(arr.shape + (nvars,), dtype=arr.dtype)


def hessian(x: Any, nvars: int) -> np.ndarray:
    if isinstance(x, Jet):
        if x.hess is None:
            raise ValueError("first-order jet carries no Hessian")
        return x.hess
    arr = np.asarray(x)
    return np.zeros(arr.shape + (nvars, nvars), dtype=arr.dtype)


def _chain(x: Jet, f0: np.ndarray, f1: np.ndarray, f2: np.ndarray) -> Jet:
    grad = f1[..., None] * x.grad
    hess = None
    if x.hess is not None:
        hess = f1[..., None, None] * x.hess + f2[..., None, None] * (
            x.grad[..., :, None] * x.grad[..., None, :]
        )
    return Jet(f0, grad, hess)


def _reciprocal(x: Jet) -> Jet:
    v = x.val
    inv = 1.0 / v
    return _chain(x, inv, -inv * inv, 2.0 * inv * inv * inv)


def _unary(
    numpy_func: Callable[[Any], Any],
    derivatives: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray, np.ndarray]],
) -> Callable[[Any], Any]:
    def apply(x: Any) -> Any:
        if isinstance(x, Jet):
            return _chain(x, *derivatives(x.val))
        return numpy_func(x)

    apply.__name__ = numpy_func.__name__
    return apply


def _exp_terms(v: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    e = np.exp(v)
    return e, e, e


def _log_terms(v: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return np.log(v), 1.0 / v, -1.0 / (v * v)


def _sqrt_terms(v: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    r = np.sqrt(v)
    return r, 0.5 / r, -0.25 / (r * v)


def _sin_terms(v: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    s, c = np.sin(v), np.cos(v)
    return s, c, -s


def _cos_terms(v: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    s, c = np.sin(v), np.cos(v)
    return c, -s, -c


def _sinh_terms(v: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    s, c = np.sinh(v), np.cosh(v)
    return s, c, s


def _cosh_terms(v: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    s, c = np.sinh(v), np.cosh(v)
    return c, s, c


exp = _unary(np.exp, _exp_terms)
log = _unary(np.log, _log_terms)
sqrt = _unary(np.sqrt, _sqrt_terms)
sin = _unary(np.sin, _sin_terms)
cos = _unary(np.cos, _cos_terms)
sinh = _unary(np.sinh, _sinh_terms)
cosh = _unary(np.cosh, _cosh_terms)


def _front(arr: np.ndarray, count: int) -> np.ndarray:
    """Move the trailing *count* derivative axes to the front."""

    k = arr.ndim
    return np.moveaxis(arr, tuple(range(k - count, k)), tuple(range(count)))


def _back(arr: np.ndarray, count: int) -> np.ndarray:
    k = arr.ndim
    return np.moveaxis(arr, tuple(range(count)), tuple(range(k - count, k)))


def _as_matrix(x: Any, *, row: bool) -> Any:
    if isinstance(x, Jet):
        if x.ndim == 1:
            return x.reshape((1, -1) if row else (-1, 1))
        return x
    arr = np.asarray(x)
    if arr.ndim == 1:
        return arr.reshape((1, -1) if row else (-1, 1))
    return arr


def _matmul(a: Any, b: Any) -> Jet:
    a_vec = np.ndim(value(a)) == 1
    b_vec = np.ndim(value(b)) == 1
    A = _as_matrix(a, row=True)
    B = _as_matrix(b, row=False)
    av, bv = value(A), value(B)
    val = av @ bv

    a_jet, b_jet = isinstance(A, Jet), isinstance(B, Jet)
    grads: list[np.ndarray] = []
    hessians: list[np.ndarray] = []
    second_order = (not a_jet or A.hess is not None) and (not b_jet or B.hess is not None)
    if a_jet:
        grads.append(np.matmul(_front(A.grad, 1), bv))
        if second_order:
            hessians.append(np.matmul(_front(A.hess, 2), bv))
    if b_jet:
        grads.append(np.matmul(av, _front(B.grad, 1)))
        if second_order:
            hessians.append(np.matmul(av, _front(B.hess, 2)))
    if a_jet and b_jet and second_order:
        cross = np.matmul(_front(A.grad, 1)[:, None], _front(B.grad, 1)[None, :])
        hessians.append(cross + np.swapaxes(cross, 0, 1))

    grad = _back(sum(grads[1:], grads[0]), 1)
    hess = _back(sum(hessians[1:], hessians[0]), 2) if second_order else None
    result = Jet(val, grad, hess)

    shape = val.shape
    if a_vec and b_vec:
        return result.reshape(())
    if a_vec:
        return result.reshape((shape[1],))
    if b_vec:
        return result.reshape((shape[0],))
    return result
