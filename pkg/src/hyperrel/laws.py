"""Randomized law checks for the fuzz harness and the acceptance suite.

Every law has a generator producing a self-contained :class:`Document` (the
instance, with ``doc.law`` naming the entities involved) and a checker taking
such a document and returning a list of failure messages.  Because checkers
only see documents, any failing instance can be written out and replayed.

The dimension cap bounds the sum of the dimensions of all spaces in the
generated chain of relations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from .document import Document
from .grouprep import full_class
from .linalg import Subspace, intersect
from .randgen import (
    FINITE_MODELS,
    MODELS,
    Model,
    PolarizedSpace,
    cotangent,
    random_chain,
    random_class,
    random_invariant_lagrangian,
    random_invariant_subspace,
    random_isotropic,
    random_relation,
    random_space,
    random_symplectomorphism,
    _invariant_symmetric,
)
from .relations import (
    compose_set,
    factor,
    identity,
    injective_over_zero,
    is_congenial,
    is_coreduction,
    is_reduction,
    pair_excess,
    projection_relation,
    transversal,
)
from .symplectic import classify, symp_orthogonal
from .wwcat import (
    IndexedRel,
    graph,
    graph_word_direct,
    graph_word_product,
    indexed,
    lemma4_normal_form,
    check_lemma4,
    normalize,
    shadow,
    snake_word,
    snake_word_right,
    trajectory_space,
    word_excess,
    ww_compose,
    ww_equal,
    ww_identity,
    ww_tensor,
    ww_trace,
)
from .grouprep import TrivialDim, invariant_complement, invariant_lagrangian_complement


@dataclass(frozen=True)
class Law:
    name: str
    generate: Callable[[Model, random.Random, int], Document]
    check: Callable[[Document], list]
    models: tuple = MODELS
    summary: str = ""


def trial_rng(seed: int, trial: int) -> random.Random:
    # independent stream per trial so single trials can be regenerated
    return random.Random(seed * 1_000_003 + trial)


def _half(cap: int) -> int:
    return max(1, cap // 2)


def _new_doc(model: Model, name: str, **args) -> Document:
    doc = Document(model.group)
    doc.law = {"name": name, "args": args}
    return doc


def _args(doc: Document) -> dict:
    return doc.law["args"]


# --------------------------------------------------------------------------
# assoc: associativity of the composition law and interchange with the tensor


def gen_assoc(model: Model, rng: random.Random, cap: int) -> Document:
    doc = _new_doc(model, "assoc", triple=["a", "b", "c"], interchange=["p", "q", "r", "s"])
    half = _half(cap)
    fs = random_chain(model, rng, 3, min(3, half), total_half=half)
    for name, f in zip("abc", fs):
        doc.add_indexed(name, IndexedRel(f, random_class(model, rng)))
    # (p x q) o (r x s) against (p o r) x (q o s), each chain on a quarter budget
    quarter = max(0, half // 2)
    p, r = random_chain(model, rng, 2, min(2, quarter), total_half=quarter)
    q, s = random_chain(model, rng, 2, min(2, quarter), total_half=quarter)
    for name, f in zip("pqrs", (p, q, r, s)):
        doc.add_indexed(name, IndexedRel(f, random_class(model, rng, 1)))
    return doc


def check_assoc(doc: Document) -> list:
    a, b, c = (doc.indexed_rel(n) for n in _args(doc)["triple"])
    out = []
    left = ww_compose(ww_compose(a, b), c)
    right = ww_compose(a, ww_compose(b, c))
    if not ww_equal(left, right):
        out.append("(ab)c != a(bc)")
    p, q, r, s = (doc.indexed_rel(n) for n in _args(doc)["interchange"])
    lhs = ww_compose(ww_tensor(p, q), ww_tensor(r, s))
    rhs = ww_tensor(ww_compose(p, r), ww_compose(q, s))
    if not ww_equal(lhs, rhs):
        out.append("(p x q)(r x s) != (pr) x (qs)")
    return out


# --------------------------------------------------------------------------
# words: graph representatives, additivity, congruence


def _random_word(model: Model, rng: random.Random, cap: int, max_len: int = 4):
    n = rng.randint(1, max_len)
    half = _half(cap)
    return random_chain(model, rng, n, min(3, half), total_half=half)


def gen_prop1(model: Model, rng: random.Random, cap: int) -> Document:
    doc = _new_doc(model, "prop1", word="w")
    doc.add_word("w", _random_word(model, rng, cap), prefix="f")
    return doc


def check_prop1(doc: Document) -> list:
    w = doc.word(_args(doc)["word"])
    out = []
    e = word_excess(w)
    direct = graph_word_direct(w)
    prod = graph_word_product(w)
    if word_excess(direct) != e:
        out.append("excess of the direct graph representative differs")
    if word_excess(prod) != e:
        out.append("excess of the graph-product representative differs")
    g = graph(shadow(w)).sub
    if shadow(direct).sub != g or shadow(prod).sub != g:
        out.append("graph representatives have the wrong shadow")
    if isinstance(e, TrivialDim):
        k = trajectory_space(w).space.dim if len(w) > 1 else 0
        if normalize(w).index != TrivialDim(k):
            out.append("trivial-group index is not the trajectory dimension")
    return out


def _split_word(model: Model, rng: random.Random, cap: int):
    fs = _random_word(model, rng, cap, max_len=5)
    if len(fs) == 1:
        fs = fs + [identity(fs[0].target)]
    cut = rng.randint(1, len(fs) - 1)
    return fs[:cut], fs[cut:]


def gen_prop2(model: Model, rng: random.Random, cap: int) -> Document:
    doc = _new_doc(model, "prop2", left="u", right="v")
    u, v = _split_word(model, rng, cap)
    doc.add_word("u", u, prefix="f")
    doc.add_word("v", v, prefix="g")
    return doc


def check_prop2(doc: Document) -> list:
    u, v = doc.word(_args(doc)["left"]), doc.word(_args(doc)["right"])
    whole = word_excess(u + v)
    parts = word_excess(u) + word_excess(v) + pair_excess(shadow(u), shadow(v))
    return [] if whole == parts else ["E(u ++ v) != E(u) + E(v) + E[shadow u, shadow v]"]


def gen_congruence(model: Model, rng: random.Random, cap: int) -> Document:
    doc = gen_prop2(model, rng, cap)
    doc.law["name"] = "congruence"
    return doc


def check_congruence(doc: Document) -> list:
    u, v = doc.word(_args(doc)["left"]), doc.word(_args(doc)["right"])
    out = []
    if not ww_equal(normalize(u + v), ww_compose(normalize(u), normalize(v))):
        out.append("normalize(u ++ v) != normalize(u) o normalize(v)")
    f, g = shadow(u), shadow(v)
    zero = pair_excess(f, g).is_zero()
    if not (zero == transversal(f, g) == injective_over_zero(f, g)):
        out.append("congeniality tests disagree")
    return out


# --------------------------------------------------------------------------
# rigidity: snakes and the reduction/coreduction factorization


def gen_snake(model: Model, rng: random.Random, cap: int) -> Document:
    doc = _new_doc(model, "snake", space="X0", relation="f")
    half = _half(cap)
    X = random_space(model, rng, min(3, half))
    doc.space_name(X.space)
    Y = random_space(model, rng, max(0, min(3, half - X.space.dim // 2)))
    doc.add_relation("f", random_relation(X, Y, rng))
    return doc


def check_snake(doc: Document) -> list:
    X = doc.space(_args(doc)["space"])
    out = []
    for label, w in (("left", snake_word(X)), ("right", snake_word_right(X))):
        if not ww_equal(normalize(w), ww_identity(X)):
            out.append(f"{label} snake is not the identity with zero index")
        if not is_congenial(*w.factors):
            out.append(f"{label} snake composite is not congenial")
    f = doc.relation(_args(doc)["relation"])
    r, c = factor(f)
    if not is_reduction(r):
        out.append("factor: r is not a reduction")
    if not is_coreduction(c):
        out.append("factor: c is not a coreduction")
    if not is_congenial(r, c):
        out.append("factor: (r, c) is not congenial")
    if compose_set(r, c) != f:
        out.append("factor: r o c != f")
    return out


# --------------------------------------------------------------------------
# trace


def gen_trace(model: Model, rng: random.Random, cap: int) -> Document:
    doc = _new_doc(model, "trace", space="X0", coisotropic="C", endo="t")
    ps = random_space(model, rng, min(3, _half(cap)))
    doc.space_name(ps.space)
    C = symp_orthogonal(ps.space, random_isotropic(ps, rng))
    doc.add_subspace("C", ps.space, C)
    doc.add_indexed("t", IndexedRel(random_relation(ps, ps, rng), random_class(model, rng)))
    return doc


def check_trace(doc: Document) -> list:
    a = _args(doc)
    X = doc.space(a["space"])
    out = []
    if ww_trace(ww_identity(X)) != full_class(X.action):
        out.append("trace of the identity is not the class of X")
    _, C = doc.subspace(a["coisotropic"])
    if not classify(X, C).coisotropic:
        return out + ["generated C is not coisotropic"]
    if ww_trace(indexed(projection_relation(X, C))) != X.action.iso_class(C):
        out.append("trace of the projection onto C is not the class of C")
    t = doc.indexed_rel(a["endo"])
    if ww_trace(t) != ww_trace(indexed(t.rel)) + t.index:
        out.append("trace(f, K) != trace(f, 0) + K")
    return out


# --------------------------------------------------------------------------
# lemma3: invariant complements


def _transform(S: Subspace, T) -> Subspace:
    return S.image(T)


def gen_lemma3(model: Model, rng: random.Random, cap: int) -> Document:
    doc = _new_doc(model, "lemma3", space="X0", L="L", J="J", lag="Lag", iso="Iso")
    ps = random_space(model, rng, min(4, _half(cap)), min_half=1)
    V = ps.space
    act = V.action
    T = random_symplectomorphism(ps, rng)
    # L inside P and J inside M are independent; a symplectomorphism scrambles both
    L1 = random_invariant_subspace(act, ps.P, rng)
    J1 = random_invariant_subspace(act, ps.M, rng)
    doc.space_name(V)
    doc.add_subspace("L", V, _transform(L1, T))
    doc.add_subspace("J", V, _transform(J1, T))
    # Lagrangian case: L = T(P), J inside T(graph of an invariant symmetric map M -> P)
    S = _invariant_symmetric(act, ps.M, rng)
    e = V.dim // 2
    rows = [list(s) + list(m) for s, m in zip(S.entries, ps.M.basis.submatrix(None, range(e, 2 * e)).entries)]
    N = Subspace(V.dim, rows) if e else Subspace.zero(0)
    doc.add_subspace("Lag", V, _transform(ps.P, T))
    doc.add_subspace("Iso", V, _transform(random_invariant_subspace(act, N, rng), T))
    return doc


def check_lemma3(doc: Document) -> list:
    a = _args(doc)
    V = doc.space(a["space"])
    act = V.action
    full = Subspace.full(V.dim)
    out = []
    _, L = doc.subspace(a["L"])
    _, J = doc.subspace(a["J"])
    M = invariant_complement(V, L, J)
    if not act.is_invariant(M):
        out.append("complement is not invariant")
    if intersect(L, M).dim or L + M != full:
        out.append("complement is not complementary to L")
    if not M.contains_space(J):
        out.append("complement does not contain J")
    _, Lg = doc.subspace(a["lag"])
    _, I = doc.subspace(a["iso"])
    M2 = invariant_lagrangian_complement(V, Lg, I)
    if not act.is_invariant(M2):
        out.append("Lagrangian complement is not invariant")
    if not classify(V, M2).lagrangian:
        out.append("Lagrangian complement is not Lagrangian")
    if intersect(Lg, M2).dim or Lg + M2 != full:
        out.append("Lagrangian complement is not complementary to L")
    if not M2.contains_space(I):
        out.append("Lagrangian complement does not contain J")
    return out


# --------------------------------------------------------------------------
# lemma4: six-block normal form


def random_lemma4_triple(model: Model, rng: random.Random, max_half: int):
    ps = random_space(model, rng, max_half, min_half=1)
    V = ps.space
    L0 = random_invariant_lagrangian(ps, rng)
    choice = rng.randrange(4)
    if choice == 0:
        N = L0
    elif choice == 1:
        N = ps.P
    elif choice == 2:
        N = ps.M
    else:
        N = random_invariant_lagrangian(ps, rng)
    I0 = random_invariant_subspace(V.action, N, rng)
    T = random_symplectomorphism(ps, rng)
    return ps, L0.image(T), I0.image(T)


def gen_lemma4(model: Model, rng: random.Random, cap: int) -> Document:
    doc = _new_doc(model, "lemma4", space="X0", L="L", I="I", L2="L2", I2="I2")
    ps, L, I = random_lemma4_triple(model, rng, min(4, _half(cap)))
    V = ps.space
    doc.space_name(V)
    doc.add_subspace("L", V, L)
    doc.add_subspace("I", V, I)
    # an equivariantly symplectomorphic copy must get the same signature
    T2 = random_symplectomorphism(ps, rng)
    doc.add_subspace("L2", V, L.image(T2))
    doc.add_subspace("I2", V, I.image(T2))
    return doc


def lemma4_triple_classes(V, L, I) -> tuple:
    act = V.action
    return act.iso_class(L), act.iso_class(I), act.iso_class(intersect(L, I))


def check_lemma4_doc(doc: Document) -> list:
    a = _args(doc)
    V = doc.space(a["space"])
    out = []
    sigs = []
    for ln, iname in ((a["L"], a["I"]), (a["L2"], a["I2"])):
        _, L = doc.subspace(ln)
        _, I = doc.subspace(iname)
        T, blocks = lemma4_normal_form(V, L, I)
        out += [f"({ln}, {iname}): {m}" for m in check_lemma4(V, L, I, T, blocks)]
        sigs.append((lemma4_triple_classes(V, L, I), blocks.signature))
    if sigs[0][0] != sigs[1][0]:
        out.append("symplectomorphic triples have different iso classes")
    elif sigs[0][1] != sigs[1][1]:
        out.append("equal iso-class triples give different signatures")
    return out


# --------------------------------------------------------------------------


LAWS = {
    "assoc": Law("assoc", gen_assoc, check_assoc, MODELS, "associativity and interchange"),
    "prop1": Law("prop1", gen_prop1, check_prop1, MODELS, "word excess equals graph-representative excess"),
    "prop2": Law("prop2", gen_prop2, check_prop2, MODELS, "excess additivity over concatenation"),
    "snake": Law("snake", gen_snake, check_snake, MODELS, "snake identities and factorization"),
    "congruence": Law("congruence", gen_congruence, check_congruence, MODELS, "normalize is a congruence"),
    "lemma3": Law("lemma3", gen_lemma3, check_lemma3, FINITE_MODELS, "invariant complements"),
    "lemma4": Law("lemma4", gen_lemma4, check_lemma4_doc, FINITE_MODELS, "six-block normal form"),
    "trace": Law("trace", gen_trace, check_trace, MODELS, "trace laws"),
}


def run_check(doc: Document) -> list:
    """Run the law named in a document; exceptions count as failures."""
    law = LAWS[doc.law["name"]]
    try:
        return law.check(doc)
    except (ArithmeticError, ValueError, AssertionError) as exc:
        return [f"{type(exc).__name__}: {exc}"]


__all__ = ["LAWS", "Law", "run_check", "trial_rng", "cotangent", "PolarizedSpace"]
