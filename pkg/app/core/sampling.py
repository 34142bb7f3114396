"""Seeded random generators for finite backend objects and maps."""
import logging
import random
from itertools import count
from typing import Optional

from .backends import Backend, VMap, VObject, finite_map, finite_object
from .carriers import FiberedMap, FiniteObject, tabulated

logger = logging.getLogger(__name__)


def rng_for(seed: int, *salt) -> random.Random:
    """Independent deterministic stream per (seed, salt)."""
    return random.Random(repr((seed, *salt)))


def random_over(
    backend: Backend,
    base: VObject,
    rng: random.Random,
    size: int,
    name: str = "N",
) -> tuple[VObject, VMap]:
    """A random finite object ``N`` with a structure map ``N → base``.

    Root sorts get up to ``size`` elements over random base elements; the other sorts
    get what the operations need plus up to ``size`` extra elements.
    """
    if not base.is_finite:
        raise ValueError("random_over needs a finite base")
    labels = {s: count() for s in backend.sorts}
    elements: dict = {s: [] for s in backend.sorts}
    image: dict = {s: {} for s in backend.sorts}
    tables: dict = {op.name: {} for op in backend.operations}

    def fresh(sort: str, over):
        el = next(labels[sort])
        elements[sort].append(el)
        image[sort][el] = over
        return el

    for s in backend.sorts:
        if s in backend.roots:
            continue
        below = base.parts[s].elements
        for _ in range(rng.randint(0, size) if below else 0):
            fresh(s, rng.choice(below))
    for s in backend.roots:
        below = base.parts[s].elements
        for _ in range(rng.randint(0, size) if below else 0):
            over = rng.choice(below)
            el = fresh(s, over)
            for op in backend.operations:
                if op.source != s:
                    continue
                target_over = base.op(op.name)(over)
                matching = [t for t in elements[op.target] if image[op.target][t] == target_over]
                if matching and rng.random() < 0.7:
                    tables[op.name][el] = rng.choice(matching)
                else:
                    tables[op.name][el] = fresh(op.target, target_over)
    obj = finite_object(backend, elements, tables, name)
    return obj, finite_map(obj, base, image, name=f"{name}→{base.name}")


def random_object(backend: Backend, rng: random.Random, size: int, name: str = "N") -> VObject:
    obj, _ = random_over(backend, backend.terminal(), rng, size, name)
    return obj


def random_set(rng: random.Random, size: int, name: str = "X", low: int = 0) -> FiniteObject:
    return FiniteObject(name, tuple(range(rng.randint(low, size))))


def random_function(dom: FiniteObject, cod: FiniteObject, rng: random.Random, name: str = "f") -> Optional[FiberedMap]:
    if dom.elements and not cod.elements:
        return None
    return tabulated(dom, cod, {x: rng.choice(cod.elements) for x in dom.elements}, name=name)


def pick(rng: random.Random, items: list, k: int) -> list:
    if len(items) <= k:
        return list(items)
    return rng.sample(items, k)
