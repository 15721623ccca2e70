"""
Symbolic countable order types and their finite truncations.

The grammar covers finite chains, ω, ω*, η, finite sums and ω·α. Every
expression has a canonical enumeration of its points; truncating at stage n
keeps the first n points, which makes stage n a subchain of stage n+1.

Text syntax: ``w``, ``w*``, ``eta``, integers, ``+`` and ``w.(expr)``,
with parentheses for grouping, so ``w.(2)+3`` is ω·2+3.
"""
import itertools
import logging
from collections.abc import Iterator
from dataclasses import dataclass
from fractions import Fraction

from .core import Poset, chain
from .exceptions import NotOrdinal, OrderTypeSyntaxError, Unclassifiable

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Fin:
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"Fin needs n >= 0, got {self.n}")

    def __str__(self) -> str:
        return str(self.n)


@dataclass(frozen=True)
class Omega:
    def __str__(self) -> str:
        return "w"


@dataclass(frozen=True)
class OmegaStar:
    def __str__(self) -> str:
        return "w*"


@dataclass(frozen=True)
class Eta:
    def __str__(self) -> str:
        return "eta"


@dataclass(frozen=True)
class Sum:
    parts: tuple

    def __post_init__(self):
        if not self.parts:
            raise ValueError("Sum needs at least one summand")
        object.__setattr__(self, "parts", tuple(self.parts))

    def __str__(self) -> str:
        return "+".join(f"({p})" if isinstance(p, Sum) else str(p) for p in self.parts)


@dataclass(frozen=True)
class OmegaDot:
    """ω·inner: the ordinal sum of ``inner`` copies of ω."""

    inner: object

    def __str__(self) -> str:
        return f"w.({self.inner})"


OrderTypeExpr = Fin | Omega | OmegaStar | Eta | Sum | OmegaDot


# ----------------------------------------------------------------------
# parsing


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _expect(self, token: str) -> None:
        self._skip()
        if not self.text.startswith(token, self.pos):
            raise OrderTypeSyntaxError(f"Expected '{token}'", self.pos)
        self.pos += len(token)

    def parse(self) -> OrderTypeExpr:
        expr = self.expr()
        self._skip()
        if self.pos != len(self.text):
            raise OrderTypeSyntaxError(f"Unexpected '{self.text[self.pos]}'", self.pos)
        return expr

    def expr(self) -> OrderTypeExpr:
        parts = [self.term()]
        while self._peek() == "+":
            self.pos += 1
            parts.append(self.term())
        return parts[0] if len(parts) == 1 else Sum(tuple(parts))

    def term(self) -> OrderTypeExpr:
        ch = self._peek()
        start = self.pos
        if not ch:
            raise OrderTypeSyntaxError("Unexpected end of input", self.pos)
        if ch.isdigit():
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            return Fin(int(self.text[start : self.pos]))
        if ch == "(":
            self.pos += 1
            inner = self.expr()
            self._expect(")")
            return inner
        if self.text.startswith("eta", self.pos) or ch == "η":
            self.pos += 3 if ch == "e" else 1
            return Eta()
        if ch in ("w", "ω"):
            self.pos += 1
            nxt = self.text[self.pos] if self.pos < len(self.text) else ""
            if nxt == "*":
                self.pos += 1
                return OmegaStar()
            if nxt in (".", "·"):
                self.pos += 1
                self._expect("(")
                inner = self.expr()
                self._expect(")")
                return OmegaDot(inner)
            return Omega()
        raise OrderTypeSyntaxError(f"Unexpected '{ch}'", self.pos)


def parse_order_type(text: str) -> OrderTypeExpr:
    return _Parser(text).parse()


# ----------------------------------------------------------------------
# predicates and normalisation


def is_ordinal(expr: OrderTypeExpr) -> bool:
    match expr:
        case Fin() | Omega():
            return True
        case OmegaStar() | Eta():
            return False
        case Sum(parts):
            return all(is_ordinal(p) for p in parts)
        case OmegaDot(inner):
            return is_ordinal(inner)
    raise TypeError(f"Not an order type expression: {expr!r}")


def contains_eta(expr: OrderTypeExpr) -> bool:
    match expr:
        case Eta():
            return True
        case Sum(parts):
            return any(contains_eta(p) for p in parts)
        case OmegaDot(inner):
            return contains_eta(inner)
    return False


def finite_size(expr: OrderTypeExpr) -> int | None:
    """Number of points, or None for infinite types."""
    match expr:
        case Fin(n):
            return n
        case Omega() | OmegaStar() | Eta():
            return None
        case Sum(parts):
            sizes = [finite_size(p) for p in parts]
            return None if None in sizes else sum(sizes)
        case OmegaDot(inner):
            return 0 if finite_size(inner) == 0 else None
    raise TypeError(f"Not an order type expression: {expr!r}")


def has_first_element(expr: OrderTypeExpr) -> bool:
    match expr:
        case Fin(n):
            return n > 0
        case Omega():
            return True
        case OmegaStar() | Eta():
            return False
        case Sum(parts):
            first = next((p for p in parts if finite_size(p) != 0), None)
            return first is not None and has_first_element(first)
        case OmegaDot(inner):
            return has_first_element(inner)
    raise TypeError(f"Not an order type expression: {expr!r}")


def normalize(expr: OrderTypeExpr) -> OrderTypeExpr:
    """Flatten sums, merge adjacent finite summands and drop empty ones."""
    match expr:
        case Sum(parts):
            flat: list[OrderTypeExpr] = []
            for part in (normalize(p) for p in parts):
                pieces = part.parts if isinstance(part, Sum) else (part,)
                for piece in pieces:
                    if isinstance(piece, Fin):
                        if piece.n == 0:
                            continue
                        if flat and isinstance(flat[-1], Fin):
                            flat[-1] = Fin(flat[-1].n + piece.n)
                            continue
                    flat.append(piece)
            if not flat:
                return Fin(0)
            return flat[0] if len(flat) == 1 else Sum(tuple(flat))
        case OmegaDot(inner):
            inner = normalize(inner)
            if inner == Fin(0):
                return Fin(0)
            if inner == Fin(1):
                return Omega()
            return OmegaDot(inner)
    return expr


# ----------------------------------------------------------------------
# enumeration


def _dyadics() -> Iterator[Fraction]:
    for level in itertools.count(1):
        denominator = 2**level
        for numerator in range(1, denominator, 2):
            yield Fraction(numerator, denominator)


def enumerate_points(expr: OrderTypeExpr) -> Iterator:
    """Yield the points of ``expr`` as sortable keys, in canonical enumeration order.

    Keys of one expression compare like the points they stand for.
    """
    match expr:
        case Fin(n):
            yield from range(n)
        case Omega():
            yield from itertools.count()
        case OmegaStar():
            yield from (-i for i in itertools.count())
        case Eta():
            yield from _dyadics()
        case Sum(parts):
            streams = [enumerate_points(p) for p in parts]
            live = list(range(len(parts)))
            while live:
                for j in list(live):
                    try:
                        yield (j, next(streams[j]))
                    except StopIteration:
                        live.remove(j)
        case OmegaDot(inner):
            # point (i, beta) is keyed (key of beta, i); diagonals d = i + rank(beta)
            columns = enumerate_points(inner)
            betas: list = []
            exhausted = False
            for d in itertools.count():
                while not exhausted and len(betas) <= d:
                    try:
                        betas.append(next(columns))
                    except StopIteration:
                        exhausted = True
                if not betas:
                    return
                for rank in range(min(d + 1, len(betas))):
                    yield (betas[rank], d - rank)
        case _:
            raise TypeError(f"Not an order type expression: {expr!r}")


def format_key(key) -> str:
    if isinstance(key, tuple):
        return "(" + ",".join(format_key(k) for k in key) + ")"
    return str(key)


@dataclass(frozen=True)
class TruncatedChain:
    """The first ``stage`` enumerated points of an order type, as a chain.

    ``keys`` lists the points in chain order; ``enumeration`` lists them in
    enumeration order and ``positions[e]`` is the chain position of the
    e-th enumerated point.
    """

    chain: Poset
    keys: tuple
    stage: int
    enumeration: tuple
    positions: tuple[int, ...]

    @property
    def position_labels(self) -> tuple[str, ...]:
        return tuple(format_key(k) for k in self.keys)

    @property
    def size(self) -> int:
        return self.chain.size


def truncate(alpha: OrderTypeExpr, n: int) -> TruncatedChain:
    if n < 0:
        raise ValueError(f"Stage must be >= 0, got {n}")
    enumeration = tuple(itertools.islice(enumerate_points(alpha), n))
    keys = tuple(sorted(enumeration))
    rank = {k: i for i, k in enumerate(keys)}
    labels = [format_key(k) for k in keys]
    return TruncatedChain(
        chain=chain(len(keys)).with_labels(labels),
        keys=keys,
        stage=n,
        enumeration=enumeration,
        positions=tuple(rank[k] for k in enumeration),
    )


# ----------------------------------------------------------------------
# decomposition α = ω·α' + n


@dataclass(frozen=True)
class OmegaDecomposition:
    alpha_prime: OrderTypeExpr
    n: int


@dataclass(frozen=True)
class FiniteCase:
    n: int


def _cantor_add(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    if not b:
        return dict(a)
    top = max(b)
    result = {k: c for k, c in a.items() if k > top}
    result[top] = a.get(top, 0) + b[top]
    result.update({k: c for k, c in b.items() if k < top})
    return result


def _cantor_form(expr: OrderTypeExpr) -> dict[int, int]:
    """Coefficients of ω^k, for ordinals below ω^ω."""
    match expr:
        case Fin(n):
            return {0: n} if n else {}
        case Omega():
            return {1: 1}
        case Sum(parts):
            form: dict[int, int] = {}
            for p in parts:
                form = _cantor_add(form, _cantor_form(p))
            return form
        case OmegaDot(inner):
            # ω·(β + γ) = ω·β + ω·γ, and ω·ω^k·c = ω^(k+1)·c
            return {k + 1: c for k, c in _cantor_form(inner).items()}
    raise NotOrdinal(f"{expr} is not an ordinal")


def _term(k: int, c: int) -> OrderTypeExpr:
    if k == 0:
        return Fin(c)
    if k == 1:
        return Omega() if c == 1 else OmegaDot(Fin(c))
    return OmegaDot(_term(k - 1, c))


def _from_cantor_form(form: dict[int, int]) -> OrderTypeExpr:
    terms = [_term(k, form[k]) for k in sorted(form, reverse=True) if form[k]]
    if not terms:
        return Fin(0)
    return terms[0] if len(terms) == 1 else Sum(tuple(terms))


def decompose_omega(alpha: OrderTypeExpr) -> OmegaDecomposition | FiniteCase:
    """Write an ordinal as ω·α' + n with α' != 0, or report it finite."""
    if not is_ordinal(alpha):
        raise NotOrdinal(f"{alpha} contains w* or eta")
    form = _cantor_form(alpha)
    n = form.get(0, 0)
    shifted = {k - 1: c for k, c in form.items() if k > 0 and c}
    if not shifted:
        return FiniteCase(n)
    return OmegaDecomposition(_from_cantor_form(shifted), n)


# ----------------------------------------------------------------------
# classification for the P_alpha construction


@dataclass(frozen=True)
class FirstBlocked:
    """1+α does not embed in α; α = n + α' with α' lacking a first element."""

    n: int
    alpha_prime: OrderTypeExpr


@dataclass(frozen=True)
class OmegaHead:
    """α is equimorphic to ω + α'."""

    alpha_prime: OrderTypeExpr


PCase = FirstBlocked | OmegaHead


def _has_non_ordinal_dot(expr: OrderTypeExpr) -> bool:
    match expr:
        case OmegaDot(inner):
            return not is_ordinal(inner) or _has_non_ordinal_dot(inner)
        case Sum(parts):
            return any(_has_non_ordinal_dot(p) for p in parts)
    return False


def _as_sum(parts: list[OrderTypeExpr]) -> OrderTypeExpr:
    if not parts:
        return Fin(0)
    return parts[0] if len(parts) == 1 else Sum(tuple(parts))


def classify_for_P(alpha: OrderTypeExpr) -> PCase:
    """Decide which P_α case applies, by a fixed symbolic rule set.

    Over this grammar the two cases cover every classifiable type: an η
    absorbs a leading ω, and any other head is ω, ω* or ω·β.

    Raises:
        Unclassifiable: the rules do not cover ``alpha``.
    """
    expr = normalize(alpha)
    if contains_eta(expr):
        # η absorbs a leading ω: ω + α embeds in α whenever α contains η
        return OmegaHead(expr)

    parts = list(expr.parts) if isinstance(expr, Sum) else [expr]
    n = 0
    if isinstance(parts[0], Fin):
        n = parts.pop(0).n
    if not parts:
        return FirstBlocked(n, Fin(0))

    head, tail = parts[0], parts[1:]
    match head:
        case OmegaStar() if not _has_non_ordinal_dot(expr):
            return FirstBlocked(n, _as_sum(parts))
        case Omega():
            return OmegaHead(_as_sum(tail))
        case OmegaDot(inner) if is_ordinal(inner):
            # ω·β = ω + ω·β'' where β = 1 + β''
            form = _cantor_form(inner)
            if max(form) == 0:
                rest = normalize(OmegaDot(Fin(form[0] - 1)))
            else:
                rest = OmegaDot(inner)
            return OmegaHead(normalize(_as_sum([rest, *tail])))
    logger.warning(f"No classification rule applies to {alpha}")
    raise Unclassifiable(f"Cannot classify {alpha} for the P construction")
