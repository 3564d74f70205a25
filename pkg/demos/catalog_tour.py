"""Tour of the built-in catalog: classify each triple and show its metric data.

Run with ``python3 demos/catalog_tour.py``.
"""

from bisymplectic import builtin_example, classify_triple, linalg, nijenhuis, triple_operators
from bisymplectic.catalog import catalog_names

EXTRA = ("product(dotti-fino-8,flat-hk-4)", "product(dotti-fino-8,-flat-hk-4)", "product(nil3xR,flat-hs-4)")


def describe(name):
    entry = builtin_example(name)
    c = classify_triple(*entry.forms)
    print(f"{name}  (dimension {entry.n})")
    print(f"  tag           {c.tag.value}")
    print(f"  A_i^2 signs   {c.square_signs}")
    if c.metric is not None:
        p, q, z = c.metric.signature
        print(f"  metric        signature ({p}, {q}), null {z}")
    if c.splitting is not None:
        print(f"  A3 leaves     +1: {c.splitting[0].dim}, -1: {c.splitting[1].dim}")
    ident = linalg.identity(entry.n)
    integrable = [nijenhuis(entry.algebra, a).is_zero for a in triple_operators(*entry.forms)
                  if linalg.matrices_equal(a @ a, ident) or linalg.matrices_equal(a @ a, -ident)]
    print(f"  Nijenhuis     {sum(integrable)}/{len(integrable)} operators integrable")
    print()


if __name__ == "__main__":
    for name in list(catalog_names()) + list(EXTRA):
        describe(name)
