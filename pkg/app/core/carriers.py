"""Carriers: finite and lazily enumerated sets of hashable elements, and fibered maps between them.

Elements are atoms (``str`` / ``int``) or nested tuples of elements. A lazy carrier is
only ever enumerated up to a depth; enumerations are monotone in the depth.
"""
import json
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable, Hashable, Iterable, Optional, Sequence

from .errors import ParseError, UncomputablePullback

logger = logging.getLogger(__name__)

Element = Hashable


def to_json(el: Any) -> Any:
    if isinstance(el, tuple):
        return [to_json(x) for x in el]
    return el


def from_json(value: Any) -> Any:
    if isinstance(value, list):
        return tuple(from_json(x) for x in value)
    return value


def encode(el: Element) -> str:
    """Canonical text form: compact JSON, tuples written as arrays."""
    return json.dumps(to_json(el), separators=(",", ":"), ensure_ascii=False)


def decode(text: str) -> Element:
    return from_json(json.loads(text))


class Carrier(ABC):
    name: str

    @abstractmethod
    def contains(self, el: Element) -> bool: ...

    @abstractmethod
    def enumerate(self, depth: int) -> tuple: ...

    @property
    @abstractmethod
    def is_finite(self) -> bool: ...


@dataclass(frozen=True, eq=False)
class FiniteObject(Carrier):
    name: str
    elements: tuple

    def __post_init__(self):
        elements = tuple(self.elements)
        members = frozenset(elements)
        if len(members) != len(elements):
            raise ValueError(f"duplicate elements in {self.name!r}")
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "_members", members)

    def contains(self, el: Element) -> bool:
        return el in self._members

    def enumerate(self, depth: int = 0) -> tuple:
        return self.elements

    @property
    def is_finite(self) -> bool:
        return True

    def __len__(self) -> int:
        return len(self.elements)


@dataclass(frozen=True, eq=False)
class LazyObject(Carrier):
    name: str
    member: Callable[[Element], bool]
    enumerator: Callable[[int], Iterable[Element]]
    _cache: dict = field(default_factory=dict, repr=False)

    def contains(self, el: Element) -> bool:
        return self.member(el)

    def enumerate(self, depth: int) -> tuple:
        if depth not in self._cache:
            self._cache[depth] = tuple(dict.fromkeys(self.enumerator(max(depth, 0))))
        return self._cache[depth]

    @property
    def is_finite(self) -> bool:
        return False


EMPTY = FiniteObject("0", ())
POINT = FiniteObject("1", ("*",))


def finite_or_lazy(
    name: str,
    parts: Sequence[Carrier],
    build: Callable[[int], Iterable[Element]],
    member: Callable[[Element], bool],
) -> Carrier:
    """A carrier that is finite exactly when every part it is built from is finite."""
    if all(p.is_finite for p in parts):
        return FiniteObject(name, tuple(dict.fromkeys(build(0))))
    return LazyObject(name, member, build)


def words(carrier: Carrier, depth: int) -> Iterable[tuple]:
    # a word of length n uses letters enumerated at depth - n
    for n in range(depth + 1):
        letters = carrier.enumerate(depth - n)
        yield from product(letters, repeat=n)


def list_carrier(carrier: Carrier, name: Optional[str] = None) -> LazyObject:
    name = name or f"{carrier.name}*"
    return LazyObject(
        name,
        lambda w: isinstance(w, tuple) and all(carrier.contains(x) for x in w),
        lambda d: words(carrier, d),
    )


def product_carrier(name: str, factors: Sequence[Carrier]) -> Carrier:
    factors = tuple(factors)
    return finite_or_lazy(
        name,
        factors,
        lambda d: product(*(f.enumerate(d) for f in factors)),
        lambda t: isinstance(t, tuple)
        and len(t) == len(factors)
        and all(f.contains(x) for f, x in zip(factors, t)),
    )


def dependent_sum(
    name: str,
    base: Carrier,
    family: Callable[[Element], Carrier],
    member: Callable[[Element], bool],
) -> Carrier:
    """Elements ``(b, x)`` with ``b`` in ``base`` and ``x`` in ``family(b)``."""

    def build(d: int):
        for b in base.enumerate(d):
            for x in family(b).enumerate(d):
                yield (b, x)

    if base.is_finite:
        fibres = {b: family(b) for b in base.elements}
        if all(f.is_finite for f in fibres.values()):
            return FiniteObject(name, tuple((b, x) for b, f in fibres.items() for x in f.elements))
    return LazyObject(name, member, build)


def union_of(
    name: str,
    base: Carrier,
    family: Callable[[Element], Carrier],
    member: Callable[[Element], bool],
) -> Carrier:
    """Union of the disjoint carriers ``family(b)`` over ``b`` in ``base``."""

    def build(d: int):
        for b in base.enumerate(d):
            yield from family(b).enumerate(d)

    if base.is_finite:
        fibres = [family(b) for b in base.elements]
        if all(f.is_finite for f in fibres):
            return FiniteObject(name, tuple(dict.fromkeys(x for f in fibres for x in f.elements)))
    return LazyObject(name, member, build)


@dataclass(frozen=True, eq=False)
class FiberedMap:
    """A map of carriers, optionally able to answer "which elements land on y"."""

    dom: Carrier
    cod: Carrier
    forward: Callable[[Element], Element]
    fiber_fn: Optional[Callable[[Element], Carrier]] = None
    name: str = "f"
    _index: dict = field(default_factory=dict, repr=False)

    def __call__(self, el: Element) -> Element:
        return self.forward(el)

    @property
    def fibered(self) -> bool:
        return self.fiber_fn is not None or self.dom.is_finite

    def fiber(self, y: Element) -> Carrier:
        if self.fiber_fn is not None:
            return self.fiber_fn(y)
        if not self.dom.is_finite:
            raise UncomputablePullback(
                f"map {self.name} has a lazy domain and no fiber function",
                {"map": self.name},
            )
        if _SENTINEL not in self._index:
            buckets: dict = {}
            for x in self.dom.elements:
                buckets.setdefault(self.forward(x), []).append(x)
            self._index.update(
                {k: FiniteObject(f"{self.name}^-1", tuple(v)) for k, v in buckets.items()}
            )
            self._index[_SENTINEL] = None
        found = self._index.get(y)
        return found if found is not None else FiniteObject(f"{self.name}^-1", ())

    def table(self, depth: int) -> dict:
        return {x: self.forward(x) for x in self.dom.enumerate(depth)}


_SENTINEL = object()


def identity(carrier: Carrier) -> FiberedMap:
    return FiberedMap(
        carrier,
        carrier,
        lambda x: x,
        lambda y: FiniteObject("id^-1", (y,)) if carrier.contains(y) else EMPTY,
        name=f"id_{carrier.name}",
    )


def compose(g: FiberedMap, f: FiberedMap) -> FiberedMap:
    """``g ∘ f``; the fiber over z is the union of the fibers of f over the fiber of g."""
    fiber_fn = None
    if g.fibered and f.fibered:

        def fiber_fn(z):
            return union_of(
                f"({g.name}∘{f.name})^-1",
                g.fiber(z),
                f.fiber,
                lambda x: f.dom.contains(x) and g(f(x)) == z,
            )

    return FiberedMap(f.dom, g.cod, lambda x: g(f(x)), fiber_fn, name=f"{g.name}∘{f.name}")


def constant(dom: Carrier, cod: Carrier, value: Element, name: str = "!") -> FiberedMap:
    return FiberedMap(dom, cod, lambda _: value, lambda y: dom if y == value else EMPTY, name=name)


def tabulated(dom: FiniteObject, cod: Carrier, table: dict, name: str = "f") -> FiberedMap:
    missing = [x for x in dom.elements if x not in table]
    if missing:
        raise ParseError(f"map {name} is not total", {"missing": [encode(x) for x in missing]})
    stray = [encode(v) for v in table.values() if not cod.contains(v)]
    if stray:
        raise ParseError(f"map {name} leaves its codomain", {"values": stray})
    frozen = dict(table)
    return FiberedMap(dom, cod, frozen.__getitem__, None, name=name)


def first_disagreement(f: FiberedMap, g: FiberedMap, depth: int) -> Optional[Element]:
    for x in f.dom.enumerate(depth):
        if f(x) != g(x):
            return x
    return None


def same_carrier(a: Carrier, b: Carrier, depth: int) -> bool:
    if a is b:
        return True
    return set(a.enumerate(depth)) == set(b.enumerate(depth))


def image_of(
    name: str,
    base: Carrier,
    fn: Callable[[Element], Element],
    member: Callable[[Element], bool],
) -> Carrier:
    """Image of ``base`` under an injective ``fn``."""
    return finite_or_lazy(name, [base], lambda d: (fn(x) for x in base.enumerate(d)), member)


def filtered(name: str, base: Carrier, keep: Callable[[Element], bool]) -> Carrier:
    return finite_or_lazy(
        name,
        [base],
        lambda d: (x for x in base.enumerate(d) if keep(x)),
        lambda x: base.contains(x) and keep(x),
    )


def reach(depth: int) -> int:
    """Deepest level searched for a partner of an element enumerated at ``depth``.

    Depth measures differ between carriers (a word of length n over letters at depth d sits
    at depth n + d, the path it maps to at max(n, d)), so lookups go up to ``2·depth + 1``.
    """
    return 2 * depth + 1


def search(carrier: Carrier, keep: Callable[[Element], bool], depth: int, want: Any = _SENTINEL) -> list:
    """Elements of ``carrier`` satisfying ``keep``, enumerated from ``depth`` up to ``reach(depth)``.

    Stops at the first level with a hit (or, with ``want``, the first level containing it).
    """
    levels = (depth,) if carrier.is_finite else range(depth, reach(depth) + 1)
    found: list = []
    for d in levels:
        found = [x for x in carrier.enumerate(d) if keep(x)]
        if found and (want is _SENTINEL or want in found):
            break
    return found


def bijection_defect(
    f: FiberedMap,
    depth: int,
    candidates: Optional[Callable[[Element], Carrier]] = None,
) -> Optional[dict]:
    """None when ``f`` is bijective on the enumerated fragment, else the offending element.

    The fragment is ``f.dom`` and ``f.cod`` enumerated to ``depth``; partners on the other side
    are searched up to ``reach(depth)``. ``candidates(y)`` narrows the search for preimages of
    ``y``; it defaults to ``f.fiber``.
    """
    if candidates is None:
        if not f.fibered:
            return {"map": f.name, "reason": "no fiber function"}
        candidates = f.fiber
    for y in f.cod.enumerate(depth):
        found = search(candidates(y), lambda x: f(x) == y, depth)
        if len(found) != 1:
            return {"map": f.name, "element": encode(y), "preimages": len(found)}
    seen: dict = {}
    for x in f.dom.enumerate(depth):
        y = f(x)
        if seen.setdefault(y, x) != x:
            return {"map": f.name, "element": encode(y), "preimages": [encode(seen[y]), encode(x)]}
        if search(candidates(y), lambda z: f(z) == y, depth, want=x) != [x]:
            return {"map": f.name, "element": encode(y), "missing": encode(x)}
    return None


def invert_map(
    f: FiberedMap,
    depth: int,
    candidates: Optional[Callable[[Element], Carrier]] = None,
) -> Optional[FiberedMap]:
    """Two-sided inverse of ``f`` when ``bijection_defect`` finds nothing, else None."""
    if bijection_defect(f, depth, candidates) is not None:
        return None
    candidates = candidates or f.fiber

    def preimages(y):
        return search(candidates(y), lambda x: f(x) == y, depth)

    def backward(y):
        found = preimages(y)
        if len(found) != 1:
            raise UncomputablePullback(
                f"no unique preimage under {f.name}", {"element": encode(y), "preimages": len(found)}
            )
        return found[0]

    return FiberedMap(
        f.cod,
        f.dom,
        backward,
        lambda x: FiniteObject(f"{f.name}^-1^-1", (f(x),)) if f.dom.contains(x) else EMPTY,
        name=f"{f.name}^-1",
    )
