"""First-order formulas over the graph vocabulary {~, =} with counting quantifiers.

Nodes are hash-consed: constructing a node equal to an existing one returns
the existing object, so structural equality is identity and metrics are
computed once per distinct subformula.
"""

from __future__ import annotations

import hashlib
import re
import threading
import weakref
from dataclasses import dataclass

from .errors import EvaluationError, WellFormednessError

VAR_RE = re.compile(r"[a-z][a-z0-9_]*\Z")

_table: "weakref.WeakValueDictionary[tuple, Formula]" = weakref.WeakValueDictionary()
_table_lock = threading.Lock()


def _check_var(name):
    if not isinstance(name, str) or not VAR_RE.match(name):
        raise WellFormednessError(f"invalid variable name {name!r}")
    return name


class Formula:
    """Base class. Subclasses set ``tag`` and define ``_fields``."""

    __slots__ = ("_key", "_hash", "depth", "length", "variables", "free", "digest",
                 "_compiled", "__weakref__")
    tag = "?"

    def __new__(cls, *args):
        key = cls._normalize(*args)
        with _table_lock:
            obj = _table.get(key)
            if obj is not None:
                return obj
            obj = object.__new__(cls)
            obj._key = key
            obj._hash = hash(key)
            obj._compiled = None
            obj._init_metrics()
            _table[key] = obj
            return obj

    def __reduce__(self):
        return (type(self), self._key[1:])

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other

    def __repr__(self):
        return f"<{type(self).__name__} {to_text(self)}>"

    def __str__(self):
        return to_text(self)

    @property
    def children(self) -> tuple["Formula", ...]:
        return ()

    def _digest_of(self, *parts) -> bytes:
        h = hashlib.blake2b(digest_size=16)
        for p in parts:
            if isinstance(p, Formula):
                h.update(p.digest)
            else:
                h.update(repr(p).encode())
            h.update(b"|")
        return h.digest()

    # convenience operators
    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)


class _Atom(Formula):
    __slots__ = ()

    @classmethod
    def _normalize(cls, x, y):
        return (cls.tag, _check_var(x), _check_var(y))

    @property
    def x(self):
        return self._key[1]

    @property
    def y(self):
        return self._key[2]

    def _init_metrics(self):
        self.depth = 0
        self.length = 3
        self.variables = frozenset((self.x, self.y))
        self.free = self.variables
        self.digest = self._digest_of(self.tag, self.x, self.y)


class Eq(_Atom):
    __slots__ = ()
    tag = "eq"


class Adj(_Atom):
    __slots__ = ()
    tag = "adj"


class Not(Formula):
    __slots__ = ()
    tag = "not"

    @classmethod
    def _normalize(cls, sub):
        if not isinstance(sub, Formula):
            raise WellFormednessError("negation of a non-formula")
        return ("not", sub)

    @property
    def sub(self) -> Formula:
        return self._key[1]

    @property
    def children(self):
        return (self.sub,)

    def _init_metrics(self):
        s = self.sub
        self.depth = s.depth
        self.length = s.length + 1
        self.variables = s.variables
        self.free = s.free
        self.digest = self._digest_of("not", s)


class _NAry(Formula):
    __slots__ = ()

    @classmethod
    def _normalize(cls, *subs):
        if len(subs) == 1 and isinstance(subs[0], (list, tuple)):
            subs = tuple(subs[0])
        if len(subs) < 2:
            raise WellFormednessError(f"{cls.__name__} needs at least two operands")
        for s in subs:
            if not isinstance(s, Formula):
                raise WellFormednessError(f"{cls.__name__} operand is not a formula")
        return (cls.tag, tuple(subs))

    @property
    def subs(self) -> tuple[Formula, ...]:
        return self._key[1]

    @property
    def children(self):
        return self.subs

    def _init_metrics(self):
        subs = self.subs
        self.depth = max(s.depth for s in subs)
        self.length = sum(s.length for s in subs) + len(subs) - 1
        self.variables = frozenset().union(*(s.variables for s in subs))
        self.free = frozenset().union(*(s.free for s in subs))
        self.digest = self._digest_of(self.tag, *subs)


class And(_NAry):
    __slots__ = ()
    tag = "and"


class Or(_NAry):
    __slots__ = ()
    tag = "or"


class _Quant(Formula):
    __slots__ = ()

    @classmethod
    def _normalize(cls, var, body):
        if not isinstance(body, Formula):
            raise WellFormednessError("quantifier body is not a formula")
        return (cls.tag, _check_var(var), body)

    @property
    def var(self) -> str:
        return self._key[1]

    @property
    def body(self) -> Formula:
        return self._key[2]

    @property
    def children(self):
        return (self.body,)

    def _init_metrics(self):
        b = self.body
        self.depth = b.depth + 1
        self.length = b.length + 2
        self.variables = b.variables | {self.var}
        self.free = b.free - {self.var}
        self.digest = self._digest_of(self.tag, self.var, b)


class Exists(_Quant):
    __slots__ = ()
    tag = "exists"


class Forall(_Quant):
    __slots__ = ()
    tag = "forall"


class CountExists(Formula):
    """At least m vertices satisfy the body."""

    __slots__ = ()
    tag = "count"

    @classmethod
    def _normalize(cls, m, var, body):
        if not isinstance(m, int) or isinstance(m, bool) or m < 1:
            raise WellFormednessError(f"counting threshold must be an integer >= 1, got {m!r}")
        if not isinstance(body, Formula):
            raise WellFormednessError("quantifier body is not a formula")
        return ("count", m, _check_var(var), body)

    @property
    def m(self) -> int:
        return self._key[1]

    @property
    def var(self) -> str:
        return self._key[2]

    @property
    def body(self) -> Formula:
        return self._key[3]

    @property
    def children(self):
        return (self.body,)

    def _init_metrics(self):
        b = self.body
        self.depth = b.depth + 1
        self.length = b.length + 2
        self.variables = b.variables | {self.var}
        self.free = b.free - {self.var}
        self.digest = self._digest_of("count", self.m, self.var, b)


QUANTIFIERS = (Exists, Forall, CountExists)


# builders


def conj(*subs) -> Formula:
    """Conjunction that collapses a single operand; flattens a list argument."""
    if len(subs) == 1 and isinstance(subs[0], (list, tuple)):
        subs = tuple(subs[0])
    if not subs:
        raise WellFormednessError("empty conjunction")
    return subs[0] if len(subs) == 1 else And(*subs)


def disj(*subs) -> Formula:
    if len(subs) == 1 and isinstance(subs[0], (list, tuple)):
        subs = tuple(subs[0])
    if not subs:
        raise WellFormednessError("empty disjunction")
    return subs[0] if len(subs) == 1 else Or(*subs)


def implies(a: Formula, b: Formula) -> Formula:
    return Or(Not(a), b)


def iff(a: Formula, b: Formula) -> Formula:
    return And(Or(Not(a), b), Or(Not(b), a))


def exists(variables, body: Formula) -> Formula:
    if isinstance(variables, str):
        variables = [variables]
    for v in reversed(list(variables)):
        body = Exists(v, body)
    return body


def forall(variables, body: Formula) -> Formula:
    if isinstance(variables, str):
        variables = [variables]
    for v in reversed(list(variables)):
        body = Forall(v, body)
    return body


def distinct(variables) -> Formula | None:
    """Conjunction of pairwise inequalities, or None for fewer than two variables."""
    vs = list(variables)
    parts = [Not(Eq(vs[i], vs[j])) for i in range(len(vs)) for j in range(i + 1, len(vs))]
    return conj(parts) if parts else None


# metrics


@dataclass(frozen=True)
class FormulaMetrics:
    L: int
    D: int
    W: int
    alternation: int | None
    prenex: bool
    bernays_schonfinkel: bool
    bs_counts: tuple[int, int] | None

    def to_json(self) -> dict:
        return {
            "L": self.L,
            "D": self.D,
            "W": self.W,
            "alternation": self.alternation,
            "prenex": self.prenex,
            "bernays_schonfinkel": self.bernays_schonfinkel,
            "bs_counts": list(self.bs_counts) if self.bs_counts else None,
        }


def is_quantifier_free(phi: Formula) -> bool:
    return phi.depth == 0


def prenex_prefix(phi: Formula):
    """Split a prenex formula into (prefix, matrix); None if not prenex."""
    prefix = []
    cur = phi
    while isinstance(cur, QUANTIFIERS):
        prefix.append(cur)
        cur = cur.body
    if cur.depth != 0:
        return None
    return prefix, cur


def bs_counts(phi: Formula):
    """(k, l) if phi is a Bernays-Schoenfinkel sentence E^k A^l (matrix), else None."""
    split = prenex_prefix(phi)
    if split is None:
        return None
    prefix, _ = split
    k = 0
    while k < len(prefix) and type(prefix[k]) is Exists:
        k += 1
    rest = prefix[k:]
    if not all(type(q) is Forall for q in rest):
        return None
    return k, len(rest)


def is_nnf(phi: Formula) -> bool:
    seen = set()
    stack = [phi]
    while stack:
        f = stack.pop()
        if f in seen:
            continue
        seen.add(f)
        if isinstance(f, Not) and not isinstance(f.sub, (Eq, Adj)):
            return False
        stack.extend(f.children)
    return True


def alternation(phi: Formula) -> int | None:
    """Alternation number of the NNF of phi (None if a negated counting quantifier remains)."""
    psi = nnf(phi)
    if not is_nnf(psi):
        return None
    memo: dict[Formula, dict[str, int]] = {}

    def chains(f) -> dict[str, int]:
        # kind of outermost quantifier on a chain -> max alternations on chains starting here
        if f in memo:
            return memo[f]
        if isinstance(f, QUANTIFIERS):
            kind = "A" if isinstance(f, Forall) else "E"
            inner = chains(f.body)
            best = 0
            for k2, a in inner.items():
                best = max(best, a if k2 == kind else a + 1)
            out = {kind: best}
        else:
            out = {}
            for c in f.children:
                for k2, a in chains(c).items():
                    out[k2] = max(out.get(k2, 0), a)
        memo[f] = out
        return out

    res = chains(psi)
    return max(res.values()) if res else 0


def measure(phi: Formula) -> FormulaMetrics:
    counts = bs_counts(phi)
    has_count = any(isinstance(f, CountExists) for f in subformulas(phi))
    return FormulaMetrics(
        L=phi.length,
        D=phi.depth,
        W=len(phi.variables),
        alternation=alternation(phi),
        prenex=prenex_prefix(phi) is not None,
        bernays_schonfinkel=counts is not None and not has_count,
        bs_counts=counts if not has_count else None,
    )


def subformulas(phi: Formula):
    """Distinct subformulas (DAG nodes), parents before children."""
    seen = set()
    order = []
    stack = [phi]
    while stack:
        f = stack.pop()
        if f in seen:
            continue
        seen.add(f)
        order.append(f)
        stack.extend(reversed(f.children))
    return order


# transformations


def nnf(phi: Formula) -> Formula:
    memo: dict[tuple[Formula, bool], Formula] = {}

    def go(f, neg):
        key = (f, neg)
        if key in memo:
            return memo[key]
        if isinstance(f, (Eq, Adj)):
            out = Not(f) if neg else f
        elif isinstance(f, Not):
            out = go(f.sub, not neg)
        elif isinstance(f, (And, Or)):
            parts = [go(s, neg) for s in f.subs]
            flip = isinstance(f, And) == neg
            out = Or(*parts) if flip else And(*parts)
        elif isinstance(f, Exists):
            out = Forall(f.var, go(f.body, True)) if neg else Exists(f.var, go(f.body, False))
        elif isinstance(f, Forall):
            out = Exists(f.var, go(f.body, True)) if neg else Forall(f.var, go(f.body, False))
        elif isinstance(f, CountExists):
            inner = CountExists(f.m, f.var, go(f.body, False))
            out = Not(inner) if neg else inner
        else:
            raise TypeError(f)
        memo[key] = out
        return out

    return go(phi, False)


def dual(phi: Formula) -> Formula:
    """Formula that holds in the complement graph exactly when phi holds in the graph."""
    memo = {}

    def go(f):
        if f in memo:
            return memo[f]
        if isinstance(f, Adj):
            out = And(Not(Adj(f.x, f.y)), Not(Eq(f.x, f.y)))
        elif isinstance(f, Eq):
            out = f
        elif isinstance(f, Not):
            out = Not(go(f.sub))
        elif isinstance(f, And):
            out = And(*[go(s) for s in f.subs])
        elif isinstance(f, Or):
            out = Or(*[go(s) for s in f.subs])
        elif isinstance(f, CountExists):
            out = CountExists(f.m, f.var, go(f.body))
        else:
            out = type(f)(f.var, go(f.body))
        memo[f] = out
        return out

    return go(phi)


def bound_variables(phi: Formula) -> set[str]:
    return {f.var for f in subformulas(phi) if isinstance(f, QUANTIFIERS)}


def relativize(phi: Formula, c: str) -> Formula:
    """Guard every quantifier by adjacency to ``c``; depth is unchanged."""
    _check_var(c)
    if c in bound_variables(phi):
        raise WellFormednessError(f"guard variable {c!r} is bound in the formula")
    if c in phi.free:
        raise WellFormednessError(f"guard variable {c!r} occurs free in the formula")
    memo = {}

    def go(f):
        if f in memo:
            return memo[f]
        if isinstance(f, (Eq, Adj)):
            out = f
        elif isinstance(f, Not):
            out = Not(go(f.sub))
        elif isinstance(f, And):
            out = And(*[go(s) for s in f.subs])
        elif isinstance(f, Or):
            out = Or(*[go(s) for s in f.subs])
        elif isinstance(f, Forall):
            out = Forall(f.var, Or(Not(Adj(f.var, c)), go(f.body)))
        elif isinstance(f, Exists):
            out = Exists(f.var, And(Adj(f.var, c), go(f.body)))
        else:
            out = CountExists(f.m, f.var, And(Adj(f.var, c), go(f.body)))
        memo[f] = out
        return out

    return go(phi)


def rename_free(phi: Formula, mapping: dict[str, str]) -> Formula:
    """Rename free occurrences; bound variables are left alone (no capture check)."""
    memo = {}

    def go(f, shadow):
        key = (f, shadow)
        if key in memo:
            return memo[key]
        if isinstance(f, (Eq, Adj)):
            x = f.x if f.x in shadow else mapping.get(f.x, f.x)
            y = f.y if f.y in shadow else mapping.get(f.y, f.y)
            out = type(f)(x, y)
        elif isinstance(f, Not):
            out = Not(go(f.sub, shadow))
        elif isinstance(f, (And, Or)):
            out = type(f)(*[go(s, shadow) for s in f.subs])
        elif isinstance(f, CountExists):
            out = CountExists(f.m, f.var, go(f.body, shadow | {f.var}))
        else:
            out = type(f)(f.var, go(f.body, shadow | {f.var}))
        memo[key] = out
        return out

    return go(phi, frozenset())


def check_well_formed(phi: Formula, strict: bool = False) -> None:
    """Raise WellFormednessError on structural problems.

    Construction already enforces names, arities and thresholds. In strict
    mode a variable may not be re-quantified inside its own scope.
    """
    if not strict:
        return
    seen = set()

    def go(f, bound):
        key = (f, bound)
        if key in seen:
            return
        seen.add(key)
        if isinstance(f, QUANTIFIERS):
            if f.var in bound:
                raise WellFormednessError(f"variable {f.var!r} is quantified twice on one branch")
            go(f.body, bound | {f.var})
        else:
            for c in f.children:
                go(c, bound)

    go(phi, frozenset())


# printing


def to_text(phi: Formula) -> str:
    memo = {}

    def go(f):
        if f in memo:
            return memo[f]
        if isinstance(f, Eq):
            out = f"{f.x}={f.y}"
        elif isinstance(f, Adj):
            out = f"{f.x}~{f.y}"
        elif isinstance(f, Not):
            out = "!" + go(f.sub)
        elif isinstance(f, And):
            out = "(" + " & ".join(go(s) for s in f.subs) + ")"
        elif isinstance(f, Or):
            out = "(" + " | ".join(go(s) for s in f.subs) + ")"
        elif isinstance(f, Exists):
            out = f"E{f.var}." + go(f.body)
        elif isinstance(f, Forall):
            out = f"A{f.var}." + go(f.body)
        else:
            out = f"E^{f.m} {f.var}." + go(f.body)
        memo[f] = out
        return out

    return go(phi)


# model checking


def _compile(phi: Formula, index: dict[str, int]):
    closures: dict[Formula, object] = {}
    counter = [0]

    def build(f):
        if f in closures:
            return closures[f]
        if isinstance(f, Eq):
            i, j = index[f.x], index[f.y]

            def fn(adj, n, env, memo):
                return env[i] == env[j]
        elif isinstance(f, Adj):
            i, j = index[f.x], index[f.y]

            def fn(adj, n, env, memo):
                return (adj[env[i]] >> env[j]) & 1 == 1
        elif isinstance(f, Not):
            g = build(f.sub)

            def fn(adj, n, env, memo):
                return not g(adj, n, env, memo)
        elif isinstance(f, And):
            gs = tuple(build(s) for s in f.subs)

            def fn(adj, n, env, memo):
                for g in gs:
                    if not g(adj, n, env, memo):
                        return False
                return True
        elif isinstance(f, Or):
            gs = tuple(build(s) for s in f.subs)

            def fn(adj, n, env, memo):
                for g in gs:
                    if g(adj, n, env, memo):
                        return True
                return False
        else:
            fn = _compile_quant(f, build(f.body), index, counter)
        closures[f] = fn
        return fn

    return build(phi)


def _compile_quant(f, g, index, counter):
    i = index[f.var]
    free_idx = tuple(sorted(index[v] for v in f.free))
    node_id = counter[0]
    counter[0] += 1
    if isinstance(f, Exists):
        def core(adj, n, env, memo):
            for v in range(n):
                env[i] = v
                if g(adj, n, env, memo):
                    return True
            return False
    elif isinstance(f, Forall):
        def core(adj, n, env, memo):
            for v in range(n):
                env[i] = v
                if not g(adj, n, env, memo):
                    return False
            return True
    else:
        m = f.m

        def core(adj, n, env, memo):
            count = 0
            for v in range(n):
                env[i] = v
                if g(adj, n, env, memo):
                    count += 1
                    if count >= m:
                        return True
            return False

    def fn(adj, n, env, memo):
        key = (node_id,) + tuple(env[k] for k in free_idx)
        hit = memo.get(key)
        if hit is not None:
            return hit
        old = env[i]
        res = core(adj, n, env, memo)
        env[i] = old
        memo[key] = res
        return res

    return fn


class CompiledFormula:
    """A formula compiled to closures; reusable across graphs."""

    def __init__(self, phi: Formula):
        self.phi = phi
        self.names = sorted(phi.variables)
        self.index = {v: k for k, v in enumerate(self.names)}
        self.fn = _compile(phi, self.index)

    def on_adjacency(self, adj, n, assignment=None) -> bool:
        env = [0] * len(self.names)
        assignment = assignment or {}
        for v in self.phi.free:
            if v not in assignment:
                raise EvaluationError(f"free variable {v!r} has no value")
        for v, val in assignment.items():
            if v in self.index:
                if not 0 <= val < n:
                    raise EvaluationError(f"vertex {val} out of range for variable {v!r}")
                env[self.index[v]] = val
        return bool(self.fn(adj, n, env, {}))

    def __call__(self, g, assignment=None) -> bool:
        return self.on_adjacency(g.adj, g.n, assignment)


def compile_formula(phi: Formula) -> CompiledFormula:
    comp = phi._compiled
    if comp is None:
        comp = CompiledFormula(phi)
        phi._compiled = comp
    return comp


def evaluate(g, phi: Formula, assignment: dict[str, int] | None = None) -> bool:
    """Tarskian truth of phi in graph g under ``assignment`` (var name -> vertex)."""
    return compile_formula(phi)(g, assignment)
