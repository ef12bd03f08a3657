"""Workspace documents: TOML files declaring quantales, spaces, rings,
presheaves and morphisms by name.

Grammar (one table per object, ``NAME`` is any TOML bare or quoted key)::

    document   := section*
    section    := "[" kind "." NAME "]" entry*
    kind       := "space" | "ring" | "quantale" | "presheaf" | "morphism"

    [space.NAME]     preset = "pseudocircle" | "sierpinski"
                   | discrete = K
                   | points = [LABEL...]  opens = [[LABEL...]...]
    [ring.NAME]      zmod = N
                   | funring = [Q, K]
                   | labels = [...]  add = [[LABEL...]...]  mul = [[LABEL...]...]
                     zero = LABEL  one = LABEL
    [quantale.NAME]  space = SPACE | ring = RING | zmod = N | funring = [Q, K]
                   | chain = N | idem = QUANTALE | product = [QUANTALE, QUANTALE]
                   | labels = [...]  order = [[LOWER, UPPER]...]  mul = [[LABEL...]...]
    [presheaf.NAME]  quantale = QUANTALE  kind = "constant" | "locally_constant"
                     coefficients = [FACTOR...]          (default [0], i.e. Z)
                   | kind = "pullback"  of = PRESHEAF  along = MORPHISM
                   | kind = "explicit"  quantale = QUANTALE
                     values = {LABEL = [FACTOR...], ...}
                     restrictions = [{lower = LABEL, upper = LABEL, matrix = [[INT...]...]}...]
    [morphism.NAME]  kind = "tau"  ringref  [space = SPACE]
                   | kind = "theta"  ringref  [space = SPACE]
                   | kind = "idem_inclusion" | "approximation"  quantale = QUANTALE
                   | kind = "projection"  product = QUANTALE  index = 1 | 2
                   | kind = "quotient"  ringref  ideal = LABEL
                   | kind = "preimage"  source = SPACE  target = SPACE  map = {POINT = POINT, ...}
                   | kind = "explicit"  source = QUANTALE  target = QUANTALE
                     pairs = [[LABEL, LABEL]...]
    ringref          := ring = RING | zmod = N | funring = [Q, K]

In ``order`` the pairs generate the partial order by reflexive-transitive
closure. A factor ``0`` stands for ``Z`` and ``d >= 2`` for ``Z/d``.
Quantales named by ``ring``, ``zmod`` and ``funring`` are ideal quantales;
``space`` gives the locale of open sets. ``tau``/``theta`` default to the
discrete space on the ring's coordinates; a morphism whose endpoint is an
ideal quantale or locale shares it with every quantale declared from the
same ring or space, so pullbacks compose.
"""

from __future__ import annotations

import re
from typing import Any, Callable

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

from .abgroups import FgAbGroup
from .errors import ParseError, QcechError, ValidationError
from .lattice import (
    Quantale,
    approximation_map,
    chain,
    idem_locale,
    order_from_pairs,
    product_quantale,
    validate_quantale,
)
from .morphisms import MonotoneMap
from .presheaf import (
    AbPresheaf,
    build_presheaf,
    constant_presheaf,
    locally_constant_on_locale,
    locally_constant_sheaf,
    pullback_presheaf,
)
from .sources import (
    FiniteRing,
    FiniteSpace,
    discrete_space,
    function_ring,
    ideal_index,
    ideal_quantale,
    induced_surjection_morphism,
    locale_of_space,
    preimage_map,
    pseudocircle,
    quotient_ring,
    sierpinski_space,
    tau_theta,
    zmod_ring,
)

KINDS = ("space", "ring", "quantale", "presheaf", "morphism")


def _section_position(text: str, kind: str, name: str) -> tuple[int, int]:
    pat = re.compile(r"^\s*\[\s*" + re.escape(kind) + r"\s*\.\s*\"?" + re.escape(name) + r"\"?\s*\]")
    for i, line in enumerate(text.splitlines(), 1):
        if pat.match(line):
            return i, line.index("[") + 1
    return 0, 0


class Workspace:
    """Named objects of one document, built lazily and validated on first use."""

    def __init__(self, text: str, source: str = "<document>"):
        self.text = text
        self.source = source
        try:
            raw = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            m = re.search(r"line (\d+), column (\d+)", str(exc))
            if m:
                line, col = int(m.group(1)), int(m.group(2))
            else:  # reported "at end of document"
                lines = text.splitlines() or [""]
                line, col = len(lines), len(lines[-1]) + 1
            raise ParseError(f"{source}:{line}:{col}: {exc}", witness={"line": line, "column": col}) from exc
        self.decls: dict[str, dict[str, Any]] = {}
        for key, body in raw.items():
            if key not in KINDS or not isinstance(body, dict):
                line, col = self._key_position(key)
                raise ParseError(f"{source}:{line}:{col}: unknown section kind {key!r}", witness={"line": line, "column": col})
            for name, decl in body.items():
                if not isinstance(decl, dict):
                    line, col = _section_position(text, key, name)
                    raise ParseError(f"{source}:{line}:{col}: [{key}.{name}] must be a table", witness={"line": line, "column": col})
            self.decls[key] = body
        self._built: dict[tuple[str, str], Any] = {}
        self._building: set[tuple[str, str]] = set()

    def _key_position(self, key: str) -> tuple[int, int]:
        for i, line in enumerate(self.text.splitlines(), 1):
            if re.match(r"^\s*\[\s*" + re.escape(key) + r"\b", line) or re.match(r"^\s*" + re.escape(key) + r"\s*[=.]", line):
                return i, 1
        return 0, 0

    @classmethod
    def from_file(cls, path: str) -> "Workspace":
        with open(path, encoding="utf-8") as fh:
            return cls(fh.read(), source=path)

    # -------------------------------------------------------------- access

    def names(self, kind: str) -> list[str]:
        return list(self.decls.get(kind, {}))

    def objects(self) -> list[tuple[str, str]]:
        return [(k, n) for k in KINDS for n in self.names(k)]

    def get(self, kind: str, name: str) -> Any:
        key = (kind, name)
        if key in self._built:
            return self._built[key]
        decl = self.decls.get(kind, {}).get(name)
        if decl is None:
            raise ParseError(f"no [{kind}.{name}] section", witness={"kind": kind, "name": name})
        if key in self._building:
            raise ParseError(f"[{kind}.{name}] refers to itself", witness={"kind": kind, "name": name})
        self._building.add(key)
        try:
            obj = getattr(self, f"_build_{kind}")(name, dict(decl))
        except ParseError as exc:
            if isinstance(exc.witness, dict) and "line" in exc.witness:
                raise
            raise self._located(kind, name, exc, ParseError) from exc
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise self._located(kind, name, exc, ParseError) from exc
        except QcechError as exc:
            if isinstance(exc.witness, dict) and "section" in exc.witness:
                raise
            raise self._located(kind, name, exc, type(exc)) from exc
        finally:
            self._building.discard(key)
        self._built[key] = obj
        return obj

    def _located(self, kind: str, name: str, exc: Exception, cls: Callable) -> QcechError:
        line, col = _section_position(self.text, kind, name)
        msg = str(exc) if not isinstance(exc, KeyError) else f"missing or unknown key {exc}"
        wit = {"section": f"{kind}.{name}", "line": line, "column": col}
        inner = getattr(exc, "witness", None)
        if inner is not None:
            wit["witness"] = inner
        return cls(f"{self.source}:{line}:{col}: [{kind}.{name}] {msg}", witness=wit)

    # -------------------------------------------------------------- builders

    def _build_space(self, name: str, d: dict) -> FiniteSpace:
        if "preset" in d:
            presets = {"pseudocircle": pseudocircle, "sierpinski": sierpinski_space}
            if d["preset"] not in presets:
                raise ParseError(f"unknown preset {d['preset']!r}")
            return presets[d["preset"]]()
        if "discrete" in d:
            return discrete_space(int(d["discrete"]))
        return FiniteSpace(d["points"], d["opens"], name=name)

    def _build_ring(self, name: str, d: dict) -> FiniteRing:
        if "zmod" in d:
            return zmod_ring(int(d["zmod"]))
        if "funring" in d:
            q, k = d["funring"]
            return function_ring(int(q), int(k))
        labels = [str(x) for x in d["labels"]]
        pos = {lab: i for i, lab in enumerate(labels)}
        add = [[pos[str(x)] for x in row] for row in d["add"]]
        mul = [[pos[str(x)] for x in row] for row in d["mul"]]
        return FiniteRing(labels, add, mul, pos[str(d["zero"])], pos[str(d["one"])], name=name)

    def _ring_ref(self, d: dict) -> FiniteRing:
        if "ring" in d:
            return self.get("ring", d["ring"])
        if "zmod" in d:
            return self._shared_ring(("zmod", int(d["zmod"])), lambda: zmod_ring(int(d["zmod"])))
        q, k = d["funring"]
        return self._shared_ring(("funring", int(q), int(k)), lambda: function_ring(int(q), int(k)))

    def _shared_ring(self, key: tuple, make: Callable[[], FiniteRing]) -> FiniteRing:
        rings = self._built.setdefault(("_shared", "rings"), {})
        if key not in rings:
            rings[key] = make()
        return rings[key]

    def _build_quantale(self, name: str, d: dict) -> Quantale:
        if "space" in d:
            return locale_of_space(self.get("space", d["space"]))
        if "ring" in d or "zmod" in d or "funring" in d:
            return ideal_quantale(self._ring_ref(d))[0]
        if "chain" in d:
            return chain(int(d["chain"]))
        if "idem" in d:
            return idem_locale(self.get("quantale", d["idem"]))[0]
        if "product" in d:
            a, b = d["product"]
            return product_quantale(self.get("quantale", a), self.get("quantale", b))[0]
        labels = [str(x) for x in d["labels"]]
        pos = {lab: i for i, lab in enumerate(labels)}
        if len(pos) != len(labels):
            raise ParseError("duplicate labels")
        leq = order_from_pairs(len(labels), [(pos[str(a)], pos[str(b)]) for a, b in d["order"]])
        mul = [[pos[str(x)] for x in row] for row in d["mul"]]
        return validate_quantale(labels, leq, mul)

    def _group(self, factors) -> FgAbGroup:
        return FgAbGroup(tuple(int(x) for x in factors))

    def _build_presheaf(self, name: str, d: dict) -> AbPresheaf:
        kind = d.get("kind", "locally_constant")
        K = self._group(d.get("coefficients", [0]))
        if kind == "pullback":
            F = self.get("presheaf", d["of"])
            f = self.get("morphism", d["along"])
            return pullback_presheaf(F, f, name=name)
        decl = self.decls["quantale"].get(d["quantale"]) if "quantale" in self.decls else None
        Q = self.get("quantale", d["quantale"])
        if kind == "constant":
            return constant_presheaf(Q, K, name=name)
        if kind == "locally_constant":
            if decl is not None and "space" in decl:
                return locally_constant_sheaf(self.get("space", decl["space"]), K, name=name)
            if not Q.is_locale:
                _, approx = approximation_map(Q)
                return pullback_presheaf(locally_constant_on_locale(approx.target, K), approx, name=name)
            return locally_constant_on_locale(Q, K, name=name)
        if kind == "explicit":
            values = {str(k): self._group(v) for k, v in d["values"].items()}
            res = {(str(r["lower"]), str(r["upper"])): r["matrix"] for r in d.get("restrictions", [])}
            return build_presheaf(Q, values, res, name=name)
        raise ParseError(f"unknown presheaf kind {kind!r}")

    def _tau_theta(self, d: dict):
        R = self._ring_ref(d)
        X = self.get("space", d["space"]) if "space" in d else None
        cache = self._built.setdefault(("_shared", "tau"), {})
        key = (id(R), id(X))
        if key not in cache:
            if X is None:
                X = self._shared_space(R)
            cache[key] = tau_theta(R, X)
        return cache[key]

    def _shared_space(self, R: FiniteRing) -> FiniteSpace:
        spaces = self._built.setdefault(("_shared", "spaces"), {})
        if id(R) not in spaces:
            spaces[id(R)] = discrete_space(R.function_params[1])
        return spaces[id(R)]

    def _build_morphism(self, name: str, d: dict) -> MonotoneMap:
        kind = d["kind"]
        if kind == "tau":
            return self._tau_theta(d).tau
        if kind == "theta":
            return self._tau_theta(d).theta
        if kind == "idem_inclusion":
            Q = self.get("quantale", d["quantale"])
            return idem_locale(Q)[1]
        if kind == "approximation":
            Q = self.get("quantale", d["quantale"])
            return approximation_map(Q)[1]
        if kind == "projection":
            pd = self.decls["quantale"][d["product"]]
            a, b = pd["product"]
            Qa, Qb = self.get("quantale", a), self.get("quantale", b)
            P = self.get("quantale", d["product"])
            idx = int(d.get("index", 1))
            if idx not in (1, 2):
                raise ParseError("projection index must be 1 or 2")
            target = Qa if idx == 1 else Qb
            n2 = Qb.n
            table = [x // n2 if idx == 1 else x % n2 for x in P.elements]
            return MonotoneMap(P, target, table, name=f"p{idx}")
        if kind == "quotient":
            R = self._ring_ref(d)
            QR, ideals = ideal_quantale(R)
            I = ideals[QR.index(str(d["ideal"]))]
            _, qh = quotient_ring(R, I)
            return induced_surjection_morphism(qh)
        if kind == "preimage":
            X, Y = self.get("space", d["source"]), self.get("space", d["target"])
            g = [Y.points.index(str(d["map"][p])) for p in X.points]
            return preimage_map(X, Y, g)
        if kind == "explicit":
            S, T = self.get("quantale", d["source"]), self.get("quantale", d["target"])
            mp = {str(a): str(b) for a, b in d["pairs"]}
            missing = [lab for lab in S.labels if lab not in mp]
            if missing:
                raise ValidationError("map is not defined on every element", witness=missing)
            return MonotoneMap(S, T, [T.index(mp[lab]) for lab in S.labels], name=name)
        raise ParseError(f"unknown morphism kind {kind!r}")

    def presheaf_quantale_name(self, presheaf: str) -> str | None:
        d = self.decls.get("presheaf", {}).get(presheaf, {})
        return d.get("quantale")

    def summary(self, kind: str, obj: Any) -> dict:
        if kind == "quantale":
            return obj.summary()
        if kind == "space":
            return {"points": list(obj.points), "opens": [obj.open_label(U) for U in obj.opens]}
        if kind == "ring":
            Q, _ = ideal_quantale(obj)
            return {"order": obj.n, "ideals": list(Q.labels), "idempotents": [obj.labels[e] for e in obj.idempotents()]}
        if kind == "presheaf":
            return obj.summary()
        if kind == "morphism":
            return {"source": obj.source.n, "target": obj.target.n, "pairs": obj.as_pairs()}
        return {}


def quantale_of_ring(R: FiniteRing) -> Quantale:
    return ideal_quantale(R)[0]


__all__ = ["Workspace", "KINDS", "quantale_of_ring", "ideal_index"]
