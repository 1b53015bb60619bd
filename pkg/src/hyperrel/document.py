"""JSON documents of named spaces, subspaces, relations, words and indexed relations.

Layout::

    {
      "group": {"kind": "trivial"} | {"kind": "finite", "generators": [M, ...]}
               | {"kind": "circle"},
      "spaces": {"X": {"dim": 2, "omega": "standard", "action": ...}},
      "subspaces": {"L": {"space": "X", "basis": [[...], ...]}},
      "relations": {"f": {"source": "X", "target": "Y", "basis": [[...], ...]}},
      "words": {"w": ["f", "g"]},
      "indexed": {"a": {"relation": "f", "index": {"trivial_dim": 1}}}
    }

Rationals are strings ``"p/q"`` (or ``"p"``) or plain integers.  The
``action`` of a space is omitted for the trivial group, lists one image per
group generator for a finite group, and is the infinitesimal generator matrix
for the circle.  Counterexample documents written by the fuzz harness carry an
extra ``"law"`` entry naming the law and its arguments.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .grouprep import (
    CIRCLE,
    TRIVIAL,
    CircleAction,
    CircleWeights,
    FiniteAction,
    FiniteChar,
    FiniteGroup,
    GroupError,
    IsoClass,
    TrivialAction,
    TrivialDim,
)
from .linalg import Mat, Rat, Subspace, rat
from .relations import CanRel
from .symplectic import SympGSpace, SymplecticError, classify, product, dual, standard_omega
from .wwcat import IndexedRel, Word


class DocumentError(ValueError):
    """Malformed document or unresolved reference."""


class ValidationFailure(ValueError):
    """The document is well formed but some entity fails its invariants."""

    def __init__(self, errors: list):
        super().__init__("; ".join(f"{e['entity']}: {e['error']}" for e in errors))
        self.errors = errors


# --------------------------------------------------------------------------
# scalar and matrix encodings


def _rat(x) -> Rat:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise DocumentError(f"rationals are integers or 'p/q' strings, got {x!r}")
    try:
        return rat(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"bad rational {x!r}") from exc


def load_matrix(rows, cols: int | None = None) -> Mat:
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise DocumentError("a matrix is a list of rows")
    try:
        return Mat([[_rat(x) for x in r] for r in rows], cols)
    except ValueError as exc:
        if isinstance(exc, DocumentError):
            raise
        raise DocumentError(str(exc)) from exc


def load_group(spec: dict):
    kind = spec.get("kind") if isinstance(spec, dict) else None
    if kind == "trivial":
        return TRIVIAL
    if kind == "circle":
        return CIRCLE
    if kind == "finite":
        gens = spec.get("generators")
        if not gens:
            raise DocumentError("a finite group needs a nonempty 'generators' list")
        return FiniteGroup([load_matrix(g) for g in gens])
    raise DocumentError(f"unknown group kind {kind!r}")


def load_action(group, dim: int, spec):
    if group == TRIVIAL:
        if spec not in (None, []):
            raise DocumentError("spaces over the trivial group take no action")
        return TrivialAction(dim)
    if group == CIRCLE:
        if spec is None:
            return CircleAction(Mat.zeros(dim, dim), (0,) if dim else ())
        return CircleAction(load_matrix(spec, dim))
    if spec is None:
        if dim == 0:
            return FiniteAction(group, (Mat.identity(0),) * group.order)
        raise DocumentError("a space over a finite group needs generator images")
    if not isinstance(spec, list) or len(spec) != len(group.generators):
        raise DocumentError("give one action matrix per group generator")
    images = [load_matrix(m, dim) for m in spec]
    return group.represent(images, dim)


def load_class(group, spec: dict) -> IsoClass:
    if not isinstance(spec, dict) or len(spec) != 1:
        raise DocumentError("an iso class is a one-key object")
    (key, val), = spec.items()
    if key == "trivial_dim" and group == TRIVIAL:
        if not isinstance(val, int) or val < 0:
            raise DocumentError("trivial_dim must be a nonnegative integer")
        return TrivialDim(val)
    if key == "character" and isinstance(group, FiniteGroup):
        return FiniteChar(group, tuple(_rat(v) for v in val))
    if key == "weights" and group == CIRCLE:
        return CircleWeights.of({int(k): int(n) for k, n in val.items()})
    raise DocumentError(f"iso class {key!r} does not match the document's group")


def space_json(V: SympGSpace) -> dict:
    half = V.dim // 2
    omega = "standard" if V.omega == standard_omega(half) else V.omega.to_json()
    out = {"dim": V.dim, "omega": omega}
    act = V.action.to_json()
    if act is not None:
        out["action"] = act
    return out


def relation_basis_json(f: CanRel) -> list:
    return f.sub.basis.to_json()


# --------------------------------------------------------------------------
# documents


@dataclass
class Document:
    group: object
    spaces: dict = field(default_factory=dict)
    subspaces: dict = field(default_factory=dict)  # name -> (space name, Subspace)
    relations: dict = field(default_factory=dict)
    words: dict = field(default_factory=dict)  # name -> list of relation names
    indexed: dict = field(default_factory=dict)  # name -> (relation name, IsoClass)
    law: dict | None = None

    # ---- building

    def space_name(self, V: SympGSpace, hint: str = "X") -> str:
        for k, W in self.spaces.items():
            if W == V:
                return k
        name = self._fresh(hint, self.spaces)
        self.spaces[name] = V
        return name

    def add_subspace(self, name: str, V: SympGSpace, S: Subspace) -> str:
        self.subspaces[name] = (self.space_name(V), S)
        return name

    def add_relation(self, name: str, f: CanRel) -> str:
        self.space_name(f.source)
        self.space_name(f.target)
        self.relations[name] = f
        return name

    def add_word(self, name: str, factors, prefix: str | None = None) -> str:
        names = []
        for i, f in enumerate(factors):
            rn = f"{prefix or name}{i}"
            self.add_relation(rn, f)
            names.append(rn)
        self.words[name] = names
        return name

    def add_indexed(self, name: str, a: IndexedRel, rel_name: str | None = None) -> str:
        rn = rel_name or f"{name}_rel"
        self.add_relation(rn, a.rel)
        self.indexed[name] = (rn, a.index)
        return name

    @staticmethod
    def _fresh(hint: str, taken: dict) -> str:
        i = len(taken)
        while f"{hint}{i}" in taken:
            i += 1
        return f"{hint}{i}"

    # ---- lookup

    def space(self, name: str) -> SympGSpace:
        try:
            return self.spaces[name]
        except KeyError:
            raise DocumentError(f"unknown space {name!r}") from None

    def subspace(self, name: str) -> tuple[SympGSpace, Subspace]:
        try:
            sn, S = self.subspaces[name]
        except KeyError:
            raise DocumentError(f"unknown subspace {name!r}") from None
        return self.space(sn), S

    def relation(self, name: str) -> CanRel:
        try:
            return self.relations[name]
        except KeyError:
            raise DocumentError(f"unknown relation {name!r}") from None

    def word(self, name: str) -> Word:
        try:
            names = self.words[name]
        except KeyError:
            raise DocumentError(f"unknown word {name!r}") from None
        return Word(tuple(self.relation(n) for n in names))

    def indexed_rel(self, name: str) -> IndexedRel:
        """An indexed relation by name; a bare relation name gets the zero index."""
        if name in self.indexed:
            rn, k = self.indexed[name]
            return IndexedRel(self.relation(rn), k)
        if name in self.relations:
            f = self.relations[name]
            return IndexedRel(f, f.source.group.zero_class())
        raise DocumentError(f"unknown indexed relation {name!r}")

    # ---- serialization

    def to_json(self) -> dict:
        def ref(V):
            for k, W in self.spaces.items():
                if W is V or W == V:
                    return k
            raise DocumentError("relation refers to an unregistered space")

        out = {"group": self.group.to_json()}
        out["spaces"] = {k: space_json(V) for k, V in self.spaces.items()}
        if self.subspaces:
            out["subspaces"] = {k: {"space": sn, "basis": S.basis.to_json()} for k, (sn, S) in self.subspaces.items()}
        out["relations"] = {
            k: {"source": ref(f.source), "target": ref(f.target), "basis": relation_basis_json(f)}
            for k, f in self.relations.items()
        }
        if self.words:
            out["words"] = {k: list(v) for k, v in self.words.items()}
        if self.indexed:
            out["indexed"] = {k: {"relation": rn, "index": c.to_json()} for k, (rn, c) in self.indexed.items()}
        if self.law is not None:
            out["law"] = self.law
        return out

    def dumps(self) -> str:
        return dumps(self.to_json())


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _section(raw: dict, key: str) -> dict:
    val = raw.get(key, {})
    if not isinstance(val, dict):
        raise DocumentError(f"'{key}' must be an object")
    return val


def relation_status(source: SympGSpace, target: SympGSpace, sub: Subspace) -> dict:
    """Classification flags of a candidate relation inside ``source x dual(target)``."""
    amb = product(source, dual(target))
    kind = classify(amb, sub)
    return {
        "isotropic": kind.isotropic,
        "coisotropic": kind.coisotropic,
        "lagrangian": kind.lagrangian,
        "invariant": amb.action.is_invariant(sub),
    }


def parse(raw: dict, strict: bool = True) -> tuple[Document, list, dict]:
    """Build a document, collecting validation errors.

    Returns ``(doc, errors, report)`` where ``report`` lists each relation and
    subspace with its classification flags.  With ``strict`` a nonempty error
    list raises :class:`ValidationFailure`.  Structural problems (bad JSON
    shapes, unresolved names) always raise :class:`DocumentError`.
    """
    if not isinstance(raw, dict):
        raise DocumentError("a document is a JSON object")
    if "group" not in raw:
        raise DocumentError("document has no 'group'")
    group = load_group(raw["group"])
    doc = Document(group)
    errors: list = []
    report = {"spaces": {}, "subspaces": {}, "relations": {}}

    for name, spec in _section(raw, "spaces").items():
        if not isinstance(spec, dict) or not isinstance(spec.get("dim"), int):
            raise DocumentError(f"space {name!r} needs an integer 'dim'")
        dim = spec["dim"]
        try:
            om_spec = spec.get("omega", "standard")
            if om_spec == "standard":
                if dim % 2:
                    raise SymplecticError("symplectic spaces are even-dimensional")
                omega = standard_omega(dim // 2)
            else:
                omega = load_matrix(om_spec, dim)
            action = load_action(group, dim, spec.get("action"))
            doc.spaces[name] = SympGSpace(dim, omega, action)
            report["spaces"][name] = {"dim": dim, "valid": True}
        except (GroupError, SymplecticError, ValueError) as exc:
            if isinstance(exc, DocumentError):
                raise
            errors.append({"entity": f"space {name}", "error": str(exc)})
            report["spaces"][name] = {"dim": dim, "valid": False}

    def resolve_space(owner: str, name) -> SympGSpace | None:
        if name in doc.spaces:
            return doc.spaces[name]
        if name in report["spaces"]:
            return None  # declared but invalid; already reported
        raise DocumentError(f"{owner} refers to unknown space {name!r}")

    for name, spec in _section(raw, "subspaces").items():
        V = resolve_space(f"subspace {name!r}", spec.get("space"))
        if V is None:
            continue
        S = Subspace(V.dim, load_matrix(spec.get("basis", []), V.dim).entries)
        kind = classify(V, S)
        inv = V.action.is_invariant(S)
        report["subspaces"][name] = {
            "dim": S.dim,
            "isotropic": kind.isotropic,
            "coisotropic": kind.coisotropic,
            "lagrangian": kind.lagrangian,
            "symplectic": kind.symplectic,
            "invariant": inv,
        }
        if not inv:
            errors.append({"entity": f"subspace {name}", "error": "not invariant"})
        doc.subspaces[name] = (spec["space"], S)

    for name, spec in _section(raw, "relations").items():
        if not isinstance(spec, dict):
            raise DocumentError(f"relation {name!r} must be an object")
        X = resolve_space(f"relation {name!r}", spec.get("source"))
        Y = resolve_space(f"relation {name!r}", spec.get("target"))
        if X is None or Y is None:
            errors.append({"entity": f"relation {name}", "error": "refers to an invalid space"})
            continue
        n = X.dim + Y.dim
        sub = Subspace(n, load_matrix(spec.get("basis", []), n).entries)
        status = relation_status(X, Y, sub)
        report["relations"][name] = {"dim": sub.dim, **status}
        if not status["lagrangian"]:
            errors.append({"entity": f"relation {name}", "error": "not Lagrangian"})
        if not status["invariant"]:
            errors.append({"entity": f"relation {name}", "error": "not invariant"})
        if status["lagrangian"] and status["invariant"]:
            doc.relations[name] = CanRel(X, Y, sub)

    for name, names in _section(raw, "words").items():
        if not isinstance(names, list) or not names:
            raise DocumentError(f"word {name!r} must be a nonempty list of relation names")
        for rn in names:
            if rn not in _section(raw, "relations"):
                raise DocumentError(f"word {name!r} refers to unknown relation {rn!r}")
        doc.words[name] = list(names)

    for name, spec in _section(raw, "indexed").items():
        rn = spec.get("relation") if isinstance(spec, dict) else None
        if rn not in _section(raw, "relations"):
            raise DocumentError(f"indexed {name!r} refers to unknown relation {rn!r}")
        doc.indexed[name] = (rn, load_class(group, spec.get("index")))

    doc.law = raw.get("law")
    if strict and errors:
        raise ValidationFailure(errors)
    return doc, errors, report


def loads(text: str, strict: bool = True) -> Document:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc
    return parse(raw, strict)[0]


def load(path: str, strict: bool = True) -> Document:
    with open(path) as fh:
        return loads(fh.read(), strict)
