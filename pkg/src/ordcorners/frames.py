"""Monomial vector fields, monomial maps, and the frame splitting tables.

Coordinates are ``x1..xn`` (boundary defining functions), ``y1..yn``
(one label per interior block) and ``z``.  A field is a finite integer
combination of terms ``x^a d/dc``; exponents may be negative, which the
wedge frames need.  Monomial exponents are MonoidVectors over coordinate
names.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from . import kernel
from .monoid_fan import MonoidVector


class NotProjectable(ValueError):
    """A pushed-forward coefficient depends on more than the target coordinates."""


def mono(**exps) -> MonoidVector:
    return MonoidVector(exps)


def x_range(i: int, j: int) -> MonoidVector:
    """Exponent of x_i * ... * x_j (empty product when j < i)."""
    return MonoidVector([(f"x{m}", 1) for m in range(i, j + 1)])


class MonomialVectorField:
    __slots__ = ("terms",)

    def __init__(self, terms=()):
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for key, c in items:
            direction, exp = key
            acc[(direction, exp)] = acc.get((direction, exp), 0) + c
        self.terms = tuple(sorted(((k, c) for k, c in acc.items() if c), key=lambda kc: (kc[0][0], kc[0][1].sort_key())))

    @classmethod
    def basis(cls, direction: str, exp: MonoidVector = MonoidVector(), coeff: int = 1) -> "MonomialVectorField":
        return cls([((direction, exp), coeff)])

    def is_zero(self) -> bool:
        return not self.terms

    def directions(self) -> set:
        return {d for (d, _), _ in self.terms}

    def __add__(self, other):
        return MonomialVectorField(list(self.terms) + list(other.terms))

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, c: int):
        return MonomialVectorField([(k, c * v) for k, v in self.terms])

    def times(self, exp: MonoidVector) -> "MonomialVectorField":
        """Multiply by the monomial with exponent ``exp``."""
        return MonomialVectorField([((d, e + exp), c) for (d, e), c in self.terms])

    def relabel(self, mapping: Mapping) -> "MonomialVectorField":
        m = lambda s: mapping.get(s, s)
        return MonomialVectorField([((m(d), e.relabel({k: m(k) for k, _ in e.items()})), c) for (d, e), c in self.terms])

    def drop_direction(self, direction: str) -> "MonomialVectorField":
        return MonomialVectorField([(k, c) for k, c in self.terms if k[0] != direction])

    def apply(self, exp: MonoidVector) -> dict:
        """The function V(x^exp) as {exponent: coefficient}."""
        out: dict = {}
        for (d, e), c in self.terms:
            p = exp[d]
            if p:
                key = e + exp - MonoidVector.unit(d)
                out[key] = out.get(key, 0) + c * p
        return {k: v for k, v in out.items() if v}

    def __eq__(self, other) -> bool:
        return isinstance(other, MonomialVectorField) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (d, e), c in self.terms:
            m = "*".join(k if v == 1 else f"{k}^{v}" for k, v in e.items()) or "1"
            parts.append(f"{c:+d}*{m}*d{d}")
        return " ".join(parts)


Field = MonomialVectorField


@dataclass(frozen=True)
class MonomialMap:
    """Target coordinates as functions of source coordinates.

    ``boundary`` maps each target boundary coordinate to the exponent of a
    source monomial; ``interior`` maps each target interior coordinate to
    the source interior coordinate it copies.
    """

    boundary: tuple  # (target name, MonoidVector) pairs
    interior: tuple  # (target name, source name) pairs

    @classmethod
    def make(cls, boundary: Mapping, interior: Mapping) -> "MonomialMap":
        for name, exp in boundary.items():
            if any(v < 0 for _, v in exp.items()):
                raise ValueError(f"target {name} is not a monomial with nonnegative exponents")
        coords = sorted({k for e in boundary.values() for k, _ in e.items()})
        if kernel.rank([e.coords(coords) for e in boundary.values()], len(coords)) < len(boundary):
            raise ValueError("target monomials are not independent coordinates")
        return cls(tuple(sorted(boundary.items())), tuple(sorted(interior.items())))

    @classmethod
    def identity(cls, boundary, interior) -> "MonomialMap":
        return cls.make({b: MonoidVector.unit(b) for b in boundary}, {i: i for i in interior})


def pushforward(v: Field, m: MonomialMap) -> Field:
    """Chain rule, with coefficients left as source monomials.

    A term x^a d/dx_i contributes nu_i * x^(a + nu - e_i) d/dt to each
    boundary target t = x^nu, and d/dy passes to every target copying y.
    """
    out = []
    for (d, e), c in v.terms:
        for t, nu in m.boundary:
            p = nu[d]
            if p:
                out.append(((t, e + nu - MonoidVector.unit(d)), c * p))
        for t, src in m.interior:
            if src == d:
                out.append(((t, e), c))
    return Field(out)


def express(v: Field, m: MonomialMap) -> Field:
    """Rewrite source-monomial coefficients in the target boundary coordinates.

    Raises NotProjectable when some coefficient is not an integral monomial
    in the targets.
    """
    names = [t for t, _ in m.boundary]
    coords = sorted({k for _, nu in m.boundary for k, _ in nu.items()} | {k for (_, e), _ in v.terms for k, _ in e.items()})
    cols = [nu.coords(coords) for _, nu in m.boundary]
    out = []
    for (d, e), c in v.terms:
        if e.is_zero():
            out.append(((d, e), c))
            continue
        sol = kernel.solve(cols, e.coords(coords)) if cols else None
        if sol is None or any(x.denominator != 1 for x in sol):
            raise NotProjectable(f"coefficient of d{d} is not a monomial in the target coordinates")
        out.append(((d, MonoidVector([(n, int(x)) for n, x in zip(names, sol)])), c))
    return Field(out)


def compose_maps(second: MonomialMap, first: MonomialMap) -> MonomialMap:
    """The map ``second`` after ``first``."""
    fb = dict(first.boundary)
    fi = dict(first.interior)
    boundary = {}
    for t, nu in second.boundary:
        total = MonoidVector()
        for s, p in nu.items():
            total = total + fb[s] * p
        boundary[t] = total
    interior = {t: fi[s] for t, s in second.interior}
    return MonomialMap.make(boundary, interior)


# -- frames ------------------------------------------------------------------


def make_frame(kind: str, n: int, block_dims=None) -> list[Field]:
    """Standard local frames for the edge, wedge and phi structures.

    ``block_dims`` is accepted as metadata; each interior block is one
    symbolic coordinate.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if block_dims is not None and len(block_dims) != n + 1:
        raise ValueError("need one block dimension per y_i and one for z")
    B = Field.basis
    frame = []
    if kind == "edge":
        for k in range(1, n + 1):
            v = x_range(k, n)
            frame += [B(f"y{k}", v), B(f"x{k}", v)]
        frame.append(B("z"))
    elif kind == "wedge":
        for k in range(1, n + 1):
            w = x_range(1, k - 1) * -1
            frame += [B(f"y{k}", w), B(f"x{k}", w)]
        frame.append(B("z", x_range(1, n) * -1))
    elif kind == "phi":
        for k in range(1, n + 1):
            v = x_range(k, n)
            frame.append(B(f"y{k}", v))
            if k == 1:
                frame.append(B("x1", v + x_range(1, 1)))
            else:
                frame.append(B(f"x{k}", v + x_range(k, k)) - B(f"x{k - 1}", v + x_range(k - 1, k - 1)))
        frame.append(B("z"))
    else:
        raise ValueError(f"unknown frame kind {kind!r}")
    return frame


def total_bdf_second_order(n: int) -> bool:
    """Every phi field sends x1...xn into its square times monomials."""
    rho = x_range(1, n)
    for f in make_frame("phi", n):
        for exp, _ in f.apply(rho).items():
            if any(exp[f"x{i}"] < 2 for i in range(1, n + 1)):
                return False
    return True


def phi_map(n: int, k: int) -> MonomialMap:
    """(y1, x1, ..., yn, xn, z) -> (y1, x1, ..., x_{k-1}, yk, t), t = xk...xn."""
    boundary = {f"x{i}": x_range(i, i) for i in range(1, k)}
    boundary["t"] = x_range(k, n)
    return MonomialMap.make(boundary, {f"y{i}": f"y{i}" for i in range(1, k + 1)})


def wedge_map(n: int, k: int) -> MonomialMap:
    """(y1, x1, ..., yn, xn, z) -> (t, y_{k+1}, x_{k+1}, ..., xn, z), t = x1...xk."""
    boundary = {f"x{i}": x_range(i, i) for i in range(k + 1, n + 1)}
    boundary["t"] = x_range(1, k)
    interior = {f"y{i}": f"y{i}" for i in range(k + 1, n + 1)}
    interior["z"] = "z"
    return MonomialMap.make(boundary, interior)


def _sub_t(field: Field, t_exp: MonoidVector) -> Field:
    """Replace the coordinate t in coefficients by its source monomial."""
    out = []
    for (d, e), c in field.terms:
        p = e["t"]
        out.append(((d, e - MonoidVector.unit("t") * p + t_exp * p), c))
    return Field(out)


def phi_table(n: int, k: int) -> list[Field]:
    """The expected images of the phi frame, one per frame field, in target notation."""
    B = Field.basis
    t = MonoidVector.unit("t")
    rows = []
    for i in range(1, n + 1):
        if i <= k:
            rows.append(B(f"y{i}", x_range(i, k - 1) + t))
        else:
            rows.append(Field())
        if i == 1:
            if k >= 2:
                rows.append(B("x1", x_range(1, k - 1) + t + x_range(1, 1)))
            else:
                rows.append(B("t", t * 2))
        elif i < k:
            pre = x_range(i, k - 1) + t
            rows.append(B(f"x{i}", pre + x_range(i, i)) - B(f"x{i - 1}", pre + x_range(i - 1, i - 1)))
        elif i == k:
            rows.append(B("t", t * 2) - B(f"x{k - 1}", t + x_range(k - 1, k - 1)))
        else:
            rows.append(Field())
    rows.append(Field())
    return rows


def wedge_table(n: int, k: int, printed: bool = False) -> list[Field]:
    """Expected images of the wedge frame; coefficients may mix t and source x's.

    ``printed=True`` uses x_{j+1}...x_n in the first family instead of the
    chain-rule value x_{j+1}...x_k.
    """
    B = Field.basis
    t = MonoidVector.unit("t")
    rows = []
    for j in range(1, n + 1):
        if j <= k:
            rows.append(Field())  # y_j
        else:
            rows.append(B(f"y{j}", (t + x_range(k + 1, j - 1)) * -1))
        if j <= k - 1:
            rows.append(B("t", x_range(j + 1, n if printed else k)))
        elif j == k:
            rows.append(B("t"))
        else:
            rows.append(B(f"x{j}", (t + x_range(k + 1, j - 1)) * -1))
    rows.append(B("z", (t + x_range(k + 1, n)) * -1))
    return rows


@dataclass(frozen=True)
class Splitting:
    table_ok: bool
    kernel_ok: bool
    image_ok: bool
    images: tuple
    kernel_frame: tuple
    image_frame: tuple


def _shift(field: Field, k: int, n_src: int) -> Field:
    mapping = {}
    for i in range(1, n_src + 1):
        mapping[f"x{i}"] = f"x{i + k}"
        mapping[f"y{i}"] = f"y{i + k}"
    return field.relabel(mapping)


def verify_splitting(kind: str, n: int, k: int) -> Splitting:
    """Push a frame through the compressed projection and compare with the tables."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    frame = make_frame(kind, n)
    if kind == "phi":
        m = phi_map(n, k)
        expected = phi_table(n, k)
    elif kind == "wedge":
        m = wedge_map(n, k)
        expected = wedge_table(n, k)
    else:
        raise ValueError("splitting tables exist for phi and wedge only")
    t_exp = dict(m.boundary)["t"]
    images = [pushforward(f, m) for f in frame]
    table_ok = all(img == _sub_t(exp, t_exp) for img, exp in zip(images, expected))

    if kind == "phi":
        kernel_src = [f for f, img in zip(frame, images) if img.is_zero()]
        image_tgt = [express(img, m) for img in images if not img.is_zero()]
        want_kernel = [_shift(f, k, n - k) for f in make_frame("phi", n - k)]
        kernel_ok = [f.drop_direction(f"x{k}") for f in kernel_src] == want_kernel
        want_image = [f.relabel({f"x{k}": "t"}) for f in make_frame("phi", k)[:-1]]
        image_ok = image_tgt == want_image
    else:
        # kernel over x_k = 0: images vanishing there
        def vanishes(img):
            return all(e[f"x{k}"] > 0 for (_, e), _ in img.terms)

        kernel_src = [f for f, img in zip(frame, images) if vanishes(img)]
        image_tgt = [express(img, m) for img in images if not vanishes(img)]
        want_kernel = [f.relabel({"z": f"y{k}"}) for f in make_frame("wedge", k - 1)]
        kernel_ok = kernel_src == want_kernel
        mapping = {"x1": "t", "z": "z"}
        for i in range(2, n - k + 2):
            mapping[f"x{i}"] = f"x{k + i - 1}"
            mapping[f"y{i}"] = f"y{k + i - 1}"
        want_image = [f.relabel(mapping) for f in make_frame("wedge", n - k + 1)[1:]]
        image_ok = image_tgt == want_image
    return Splitting(table_ok, kernel_ok, image_ok, tuple(images), tuple(kernel_src), tuple(image_tgt))
