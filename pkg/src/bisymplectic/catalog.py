"""Built-in example triples and their expected classifications.

Names:

``dotti-fino-8``  eight-dimensional two-step nilpotent algebra, hyperholomorphic
``nil3xR``        Heisenberg x R, hypersymplectic
``hsp-8``         the eight-dimensional algebra with a holomorphic symplectic pair
``triple-6``      abelian R^6 with a symplectic triple
``flat-hk-4``     flat hyper-Kaehler R^4
``flat-hs-4``     flat hypersymplectic R^4 built from a para-quaternionic model

``product(a,b)`` assembles block-diagonal products; a leading ``-`` on either
factor negates its three forms (which flips the sign of its metric).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import linalg
from .exterior import KForm, form_matrix, matrix_form
from .lie import LieAlgebra, abelian, direct_sum
from .triples import TripleTag, classify_triple

__all__ = ["ExampleCatalogEntry", "builtin_example", "catalog_names", "product", "negate"]


@dataclass(frozen=True)
class ExampleCatalogEntry:
    name: str
    algebra: LieAlgebra
    forms: Tuple[KForm, KForm, KForm]
    expected_tag: Optional[TripleTag]
    expected_signature: Optional[Tuple[int, int]] = None
    description: str = ""

    @property
    def n(self) -> int:
        return self.algebra.n


def _f(n, terms) -> KForm:
    return KForm.from_terms(n, terms)


DOTTI_FINO_BRACKETS = [(1, 3, 7, 1), (2, 4, 7, -1), (1, 4, 8, 1), (2, 3, 8, 1)]

# with d alpha(X, Y) = -alpha([X, Y]), d alpha_3 = alpha_1 ^ alpha_2 needs [e1, e2] = -e3
NIL3_BRACKETS = [(1, 2, 3, -1)]


def _dotti_fino_8() -> ExampleCatalogEntry:
    n = 8
    w1 = _f(n, [(8, 1, 1), (7, 2, 1), (6, 3, -1), (5, 4, 1)])
    w2 = _f(n, [(8, 2, 1), (7, 1, -1), (6, 4, 1), (5, 3, 1)])
    w3 = _f(n, [(8, 3, 1), (7, 4, 1), (6, 1, 1), (5, 2, -1)])
    return ExampleCatalogEntry("dotti-fino-8", LieAlgebra(n, DOTTI_FINO_BRACKETS), (w1, w2, w3),
                               TripleTag.HYPERHOLOMORPHIC_SYMPLECTIC, (4, 4),
                               "non-Kaehler hyperholomorphic symplectic nilpotent algebra")


def _hsp_8() -> ExampleCatalogEntry:
    n = 8
    w1 = _f(n, [(8, 1, 1), (7, 2, 1), (6, 3, -1), (5, 4, 1)])
    w2 = _f(n, [(8, 2, 1), (7, 1, -1), (6, 4, 1), (5, 3, 1)])
    w3 = _f(n, [(8, 2, 1), (7, 1, -1), (6, 4, -1), (5, 3, -1)])
    return ExampleCatalogEntry("hsp-8", LieAlgebra(n, DOTTI_FINO_BRACKETS), (w1, w2, w3),
                               TripleTag.HOLOMORPHIC_SYMPLECTIC_PAIR, None,
                               "left-invariant holomorphic symplectic pair")


def _nil3xr() -> ExampleCatalogEntry:
    n = 4
    w1 = _f(n, [(3, 1, 1), (2, 4, 1)])
    w2 = _f(n, [(3, 2, 1), (1, 4, -1)])
    w3 = _f(n, [(3, 2, 1), (1, 4, 1)])
    return ExampleCatalogEntry("nil3xR", LieAlgebra(n, NIL3_BRACKETS), (w1, w2, w3),
                               TripleTag.HYPERSYMPLECTIC, (2, 2),
                               "invariant hypersymplectic structure on Nil^3 x R")


def _triple_6() -> ExampleCatalogEntry:
    n = 6
    e1, e2, e3 = _f(n, [(1, 2, 1)]), _f(n, [(3, 4, 1)]), _f(n, [(5, 6, 1)])
    return ExampleCatalogEntry("triple-6", abelian(n), (e1 + e2 + e3, e1 + e2 - e3, e1 - e2 - e3),
                               TripleTag.SYMPLECTIC_TRIPLE, None,
                               "three rank-2 forms with nowhere-vanishing triple wedge")


def _flat_hk_4() -> ExampleCatalogEntry:
    n = 4
    w1 = _f(n, [(1, 2, 1), (3, 4, 1)])
    w2 = _f(n, [(1, 3, 1), (4, 2, 1)])
    w3 = _f(n, [(1, 4, 1), (2, 3, 1)])
    return ExampleCatalogEntry("flat-hk-4", abelian(n), (w1, w2, w3),
                               TripleTag.HYPERHOLOMORPHIC_SYMPLECTIC, (4, 0),
                               "flat hyper-Kaehler structure")


def para_quaternionic_model():
    """``(g, I, S, T)`` on R^4 with ``I^2 = -1, S^2 = T^2 = 1, IS = -SI = T``.

    ``g = diag(1, 1, -1, -1)``; ``I`` is isometric and ``S, T`` anti-isometric.
    """
    g = linalg.as_exact(np.diag([1, 1, -1, -1]))
    i = linalg.as_exact([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
    s = linalg.as_exact([[0, 0, 1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, -1, 0, 0]])
    return g, i, s, i @ s


def _flat_hs_4() -> ExampleCatalogEntry:
    g, i, s, t = para_quaternionic_model()
    # w_E(X, Y) = g(EX, Y) has matrix E^T g
    forms = tuple(matrix_form(e.T @ g) for e in (i, s, t))
    return ExampleCatalogEntry("flat-hs-4", abelian(4), forms, TripleTag.HYPERSYMPLECTIC, (2, 2),
                               "flat para-quaternionic (I, S, T) model")


_BUILDERS = {
    "dotti-fino-8": _dotti_fino_8,
    "nil3xR": _nil3xr,
    "hsp-8": _hsp_8,
    "triple-6": _triple_6,
    "flat-hk-4": _flat_hk_4,
    "flat-hs-4": _flat_hs_4,
}


def catalog_names() -> List[str]:
    return list(_BUILDERS)


def negate(entry: ExampleCatalogEntry) -> ExampleCatalogEntry:
    """Negate all three forms: operators are unchanged, the metric changes sign."""
    sig = entry.expected_signature
    return ExampleCatalogEntry("-" + entry.name, entry.algebra, tuple(-f for f in entry.forms),
                               entry.expected_tag, sig[::-1] if sig else None, entry.description)


def _direct_sum_form(f: KForm, g: KForm) -> KForm:
    return matrix_form(linalg.block_diag([form_matrix(f), form_matrix(g)]))


def _canonical_forms(entry: ExampleCatalogEntry) -> Tuple[KForm, KForm, KForm]:
    return classify_triple(*entry.forms).forms


def product(a: ExampleCatalogEntry, b: ExampleCatalogEntry) -> ExampleCatalogEntry:
    """Block-diagonal product of two catalog entries.

    Only a product of two hyperholomorphic or two hypersymplectic entries keeps a
    predictable tag; signatures then add.  Hypersymplectic factors are first
    rotated into canonical order so that their ``-Id`` operators line up.
    """
    fa, fb = a.forms, b.forms
    if a.expected_tag == b.expected_tag == TripleTag.HYPERSYMPLECTIC:
        fa, fb = _canonical_forms(a), _canonical_forms(b)
    forms = tuple(_direct_sum_form(f, g) for f, g in zip(fa, fb))
    tag = a.expected_tag if a.expected_tag == b.expected_tag and a.expected_tag in (
        TripleTag.HYPERHOLOMORPHIC_SYMPLECTIC, TripleTag.HYPERSYMPLECTIC) else None
    sig = None
    if tag is not None and a.expected_signature and b.expected_signature:
        sig = (a.expected_signature[0] + b.expected_signature[0],
               a.expected_signature[1] + b.expected_signature[1])
    return ExampleCatalogEntry(f"product({a.name},{b.name})", direct_sum(a.algebra, b.algebra),
                               forms, tag, sig, "block-diagonal product")


def _split_args(body: str) -> List[str]:
    depth, start, out = 0, 0, []
    for pos, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            out.append(body[start:pos])
            start = pos + 1
    out.append(body[start:])
    return [s.strip() for s in out]


def builtin_example(name: str) -> ExampleCatalogEntry:
    """Look up a catalog entry; supports ``-name`` and nested ``product(a,b)``."""
    name = name.strip()
    if name.startswith("-"):
        return negate(builtin_example(name[1:]))
    if name.startswith("product(") and name.endswith(")"):
        args = _split_args(name[len("product("):-1])
        if len(args) != 2 or not all(args):
            raise KeyError(f"product needs exactly two factors: {name!r}")
        return product(builtin_example(args[0]), builtin_example(args[1]))
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise KeyError(f"unknown example {name!r}; known: {', '.join(_BUILDERS)}") from None
