"""Text, LaTeX and JSON forms of basis keys and linear combinations.

Text grammar::

    combination := "0" | term (("+" | "-") term)*
    term        := [coeff "*"] key            coeff := int ["/" int]
    key         := factor [("⊗" | "(x)") factor]
    factor      := monomial | forest
    monomial    := "1" | variable ["^" int] ...
    ode var     := "z" int
    spde var    := "z[" label ";" b-part ";" v-part "]"  |  "z[" label ";" raw letters "]"
    forest      := "{" [monomial (";" monomial)*] "}"
    spde forest := "d^" vec "{" [monomial "D" vec (";" monomial "D" vec)*] "}"

A two-field SPDE variable is a raw word in any letter order; it is put in
normal form on input, so a monomial may parse to a combination.
"""
from __future__ import annotations

import itertools
import json
import re
from fractions import Fraction
from typing import Any

from .algebra import LinComb, Tensor2, tensor
from .errors import ParseError
from .ode import OdeForest, OdeMultiIndex
from .spde import (
    RawWord,
    SpdeForest,
    SpdeMultiIndex,
    SpdePlainForest,
    SpdeVariable,
    Word,
    canonicalize,
)

__all__ = [
    "decode_json",
    "encode_json",
    "parse",
    "render",
    "render_key",
    "render_latex",
    "render_text",
    "render_variable",
]

TENSOR = " ⊗ "


# -- text rendering ------------------------------------------------------------


def _vec(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def _power(base: str, e: int) -> str:
    return base if e == 1 else f"{base}^{e}"


def render_variable(x: SpdeVariable) -> str:
    b_part = " ".join(_power(f"b{i}", c) for i, c in enumerate(x.word.u) if c) or "-"
    counts: dict = {}
    for letter in x.word.v:
        counts[letter] = counts.get(letter, 0) + 1
    v_part = " ".join(_power(_vec(letter), r) for letter, r in counts.items()) or "-"
    return f"z[{x.label}; {b_part}; {v_part}]"


def render_key(key) -> str:
    if isinstance(key, OdeMultiIndex):
        if not key:
            return "1"
        return " ".join(_power(f"z{k}", e) for k, e in key.items)
    if isinstance(key, SpdeMultiIndex):
        if not key:
            return "1"
        return " ".join(_power(render_variable(x), e) for x, e in key.items)
    if isinstance(key, SpdeVariable):
        return render_variable(key)
    if isinstance(key, SpdeForest):
        body = " ; ".join(f"{render_key(m)} D{_vec(n)}" for m, n in key.items)
        return f"d^{_vec(key.k)}{{ {body} }}" if body else f"d^{_vec(key.k)}{{ }}"
    if isinstance(key, (OdeForest, SpdePlainForest)):
        body = " ; ".join(render_key(m) for m in key)
        return f"{{ {body} }}" if body else "{ }"
    if isinstance(key, Tensor2):
        return render_key(key.left) + TENSOR + render_key(key.right)
    raise TypeError(f"cannot render {type(key).__name__}")


def _coeff_text(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render_text(x) -> str:
    if not isinstance(x, LinComb):
        return render_key(x)
    if not x:
        return "0"
    parts = []
    for i, (key, c) in enumerate(x.items()):
        mag = abs(c)
        body = render_key(key) if mag == 1 else f"{_coeff_text(mag)}*{render_key(key)}"
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


# -- LaTeX ---------------------------------------------------------------------


def _latex_power(base: str, e: int) -> str:
    return base if e == 1 else f"{base}^{{{e}}}"


def _latex_vec(v) -> str:
    return "[" + ",".join(str(x) for x in v) + "]"


def _latex_variable(x: SpdeVariable) -> str:
    letters = [_latex_power(f"b_{{{i}}}", c) for i, c in enumerate(x.word.u) if c]
    counts: dict = {}
    for letter in x.word.v:
        counts[letter] = counts.get(letter, 0) + 1
    letters += [_latex_power(_latex_vec(letter), r) for letter, r in counts.items()]
    word = " ".join(letters) or r"\varnothing"
    return f"z_{{({x.label},{word})}}"


def _latex_key(key) -> str:
    if isinstance(key, OdeMultiIndex):
        if not key:
            return r"z^{\mathbf{0}}"
        return " ".join(_latex_power(f"z_{{{k}}}", e) for k, e in key.items)
    if isinstance(key, SpdeMultiIndex):
        if not key:
            return r"z^{\mathbf{0}}"
        return " ".join(_latex_power(_latex_variable(x), e) for x, e in key.items)
    if isinstance(key, SpdeVariable):
        return _latex_variable(key)
    if isinstance(key, SpdeForest):
        body = r" \odot ".join(f"{_latex_key(m)} D^{{({_latex_vec(n)})}}" for m, n in key.items)
        head = f"\\partial^{{{_latex_vec(key.k)}}} " if any(key.k) else ""
        return (head + body).strip() or r"z^{\mathbf{0}}"
    if isinstance(key, (OdeForest, SpdePlainForest)):
        return r" \odot ".join(_latex_key(m) for m in key) or r"z^{\mathbf{0}}"
    if isinstance(key, Tensor2):
        return f"{_latex_key(key.left)} \\otimes {_latex_key(key.right)}"
    raise TypeError(f"cannot render {type(key).__name__}")


def render_latex(x) -> str:
    if not isinstance(x, LinComb):
        return _latex_key(x)
    if not x:
        return "0"
    parts = []
    for i, (key, c) in enumerate(x.items()):
        mag = abs(c)
        if mag == 1:
            coeff = ""
        elif mag.denominator == 1:
            coeff = f"{mag.numerator}\\, "
        else:
            coeff = f"\\frac{{{mag.numerator}}}{{{mag.denominator}}}\\, "
        sign = ("-" if c < 0 else "") if i == 0 else (" - " if c < 0 else " + ")
        parts.append(sign + coeff + _latex_key(key))
    return "".join(parts)


# -- JSON ----------------------------------------------------------------------


def _encode_key(key) -> Any:
    if isinstance(key, OdeMultiIndex):
        return {str(k): e for k, e in key.items}
    if isinstance(key, SpdeVariable):
        return {"label": key.label, "u": list(key.word.u), "v": [list(n) for n in key.word.v]}
    if isinstance(key, SpdeMultiIndex):
        return [{"var": _encode_key(x), "exp": e} for x, e in key.items]
    if isinstance(key, SpdeForest):
        return {"k": list(key.k), "items": [{"member": _encode_key(m), "marker": list(n)} for m, n in key.items]}
    if isinstance(key, (OdeForest, SpdePlainForest)):
        return [_encode_key(m) for m in key]
    if isinstance(key, Tensor2):
        return {"left": _encode_key(key.left), "right": _encode_key(key.right)}
    raise TypeError(f"cannot encode {type(key).__name__}")


def _basis_name(x: LinComb) -> str:
    return x.basis or "unknown"


def encode_json(x: LinComb, indent: int | None = None) -> str:
    """Serialise a combination as ``{"basis", "terms": [{"coeff": {"num","den"}, "key"}]}``."""
    doc = {
        "basis": _basis_name(x),
        "terms": [
            {"coeff": {"num": str(c.numerator), "den": str(c.denominator)}, "key": _encode_key(k)}
            for k, c in x.items()
        ],
    }
    return json.dumps(doc, ensure_ascii=False, indent=indent, sort_keys=False)


def _split_basis(name: str) -> tuple[str, list[str]]:
    """``"tensor(a,forest(b))"`` → ``("tensor", ["a", "forest(b)"])``."""
    if "(" not in name:
        return name, []
    head, rest = name.split("(", 1)
    if not rest.endswith(")"):
        raise ValueError(f"malformed basis name {name!r}")
    rest = rest[:-1]
    args, depth, start = [], 0, 0
    for i, ch in enumerate(rest):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            args.append(rest[start:i])
            start = i + 1
    args.append(rest[start:])
    return head, args


def _decode_variable(doc) -> SpdeVariable:
    return SpdeVariable(doc["label"], Word(tuple(doc["u"]), tuple(tuple(n) for n in doc["v"])))


def _decode_key(basis: str, doc):
    head, args = _split_basis(basis)
    if head == "ode-multiindex":
        return OdeMultiIndex({int(k): e for k, e in doc.items()})
    if head == "spde-variable":
        return _decode_variable(doc)
    if head == "spde-multiindex":
        return SpdeMultiIndex((_decode_variable(t["var"]), t["exp"]) for t in doc)
    if head == "spde-forest":
        return SpdeForest(
            tuple(doc["k"]), [(_decode_key("spde-multiindex", t["member"]), tuple(t["marker"])) for t in doc["items"]]
        )
    if head == "forest":
        members = [_decode_key(args[0], m) for m in doc]
        return OdeForest(members) if args[0] == "ode-multiindex" else SpdePlainForest(members)
    if head == "tensor":
        return Tensor2(_decode_key(args[0], doc["left"]), _decode_key(args[1], doc["right"]))
    raise ValueError(f"unknown basis {basis!r}")


def decode_json(text: str) -> LinComb:
    doc = json.loads(text)
    basis = doc["basis"]
    terms = {}
    for t in doc["terms"]:
        terms[_decode_key(basis, t["key"])] = Fraction(int(t["coeff"]["num"]), int(t["coeff"]["den"]))
    return LinComb(terms, basis=None if basis == "unknown" else basis)


def render(x, fmt: str = "text") -> str:
    if fmt == "text":
        return render_text(x)
    if fmt == "latex":
        return render_latex(x)
    if fmt == "json":
        return encode_json(x if isinstance(x, LinComb) else LinComb.single(x))
    raise ValueError(f"unknown format {fmt!r}")


# -- parsing -------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<tensor>⊗|\(x\))|(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[-+*/^{};()\[\],:]))"
)


class _Parser:
    def __init__(self, text: str, mode: str, dim: int | None):
        self.text = text
        self.mode = mode
        self.dim = dim
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            match = _TOKEN.match(text, pos)
            if not match or match.end() == pos:
                raise ParseError("unexpected character", text, len(text) - len(text[pos:].lstrip()))
            kind = match.lastgroup
            start = match.start(kind)
            self.tokens.append((kind, match.group(kind), start))
            pos = match.end()
        self.i = 0

    # token helpers
    def peek(self, offset: int = 0):
        j = self.i + offset
        return self.tokens[j] if j < len(self.tokens) else ("end", "", len(self.text))

    def at(self, value: str, offset: int = 0) -> bool:
        kind, tok, _ = self.peek(offset)
        return tok == value and kind != "end"

    def take(self, value: str | None = None, kind: str | None = None) -> str:
        k, tok, pos = self.peek()
        if k == "end" or (value is not None and tok != value) or (kind is not None and k != kind):
            want = value or kind
            raise ParseError(f"expected {want!r}, found {tok or 'end of input'!r}", self.text, pos)
        self.i += 1
        return tok

    def error(self, message: str):
        raise ParseError(message, self.text, self.peek()[2])

    def number(self) -> int:
        return int(self.take(kind="int"))

    def exponent(self) -> int:
        if self.at("^"):
            self.take("^")
            return self.number()
        return 1

    def vector(self) -> tuple[int, ...]:
        start = self.peek()[2]
        self.take("(")
        out = [self.number()]
        while self.at(","):
            self.take(",")
            out.append(self.number())
        self.take(")")
        if self.dim is not None and len(out) != self.dim + 1:
            raise ParseError(f"dimension mismatch: vector {tuple(out)} needs {self.dim + 1} entries", self.text, start)
        return tuple(out)

    # grammar
    def combination(self) -> LinComb:
        if self.at("0") and self.peek(1)[0] == "end":
            self.take("0")
            return LinComb.zero()
        sign = 1
        if self.at("-"):
            self.take("-")
            sign = -1
        out = sign * self.term()
        basis = out.basis
        while self.at("+") or self.at("-"):
            sign = 1 if self.take() == "+" else -1
            start = self.peek()[2]
            term = sign * self.term()
            if term and out and term.basis != basis:
                raise ParseError(f"cannot add a {term.basis} term to a {basis} sum", self.text, start)
            out = out + term
            basis = basis or term.basis
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return out

    def term(self) -> LinComb:
        coeff = Fraction(1)
        kind, _, _ = self.peek()
        if kind == "int" and (self.at("*", 1) or self.at("/", 1)):
            num = self.number()
            den = 1
            if self.at("/"):
                self.take("/")
                if self.peek()[0] == "int" and int(self.peek()[1]) == 0:
                    self.error("zero denominator")
                den = self.number()
            self.take("*")
            coeff = Fraction(num, den)
        return coeff * self.key()

    def key(self) -> LinComb:
        left = self.factor()
        if self.peek()[0] == "tensor":
            self.take(kind="tensor")
            right = self.factor()
            return tensor(left, right)
        return left

    def factor(self) -> LinComb:
        if self.at("{"):
            return self.forest(None)
        if self.at("d") and self.at("^", 1):
            self.take("d")
            self.take("^")
            return self.forest(self.vector())
        return self.monomial()

    def monomial(self) -> LinComb:
        one: Any = OdeMultiIndex() if self.mode == "ode" else SpdeMultiIndex()
        if self.at("1"):
            self.take("1")
            return LinComb.single(one)
        out = LinComb.single(one)
        seen = False
        while self.peek()[0] == "name" and re.fullmatch(r"z\d*", self.peek()[1]):
            out = out * self.variable()
            seen = True
        if not seen:
            self.error("expected a monomial")
        return out

    def variable(self) -> LinComb:
        kind, tok, pos = self.peek()
        if self.mode == "ode":
            if tok == "z" or not tok[1:].isdigit():
                raise ParseError("expected z<k>", self.text, pos)
            self.take()
            return LinComb.single(OdeMultiIndex({int(tok[1:]): self.exponent()}))
        if tok != "z":
            raise ParseError("expected z[...]", self.text, pos)
        self.take("z")
        self.take("[")
        label = self.take(kind="name") if self.peek()[0] == "name" else self.take(kind="int")
        self.take(";")
        first = self.letters()
        if self.at(";"):
            self.take(";")
            second = self.letters()
            self.take("]")
            u = [0] * self._dim_from(first + second)
            v = []
            for letter, e in first:
                if not isinstance(letter, int):
                    self.error("b-part may only contain b letters")
                u[letter] += e
            for letter, e in second:
                if isinstance(letter, int):
                    self.error("v-part may only contain vector letters")
                v.extend([letter] * e)
            x: LinComb = LinComb.single(SpdeMultiIndex.of(SpdeVariable(label, Word(tuple(u), v))))
        else:
            self.take("]")
            dim = self._dim_from(first)
            raw = RawWord(tuple(letter for letter, e in first for _ in range(e)), dim=dim)
            x = canonicalize(raw, label).map_keys(SpdeMultiIndex.of, basis=SpdeMultiIndex.basis)
        power = self.exponent()
        out = LinComb.single(SpdeMultiIndex())
        for _ in range(power):
            out = out * x
        return out

    def _dim_from(self, letters) -> int:
        if self.dim is not None:
            size = self.dim + 1
        else:
            sizes = {len(a) for a, _ in letters if not isinstance(a, int)}
            if len(sizes) > 1:
                self.error("dimension mismatch between letters")
            size = sizes.pop() if sizes else max((a + 1 for a, _ in letters if isinstance(a, int)), default=1)
        for a, _ in letters:
            if isinstance(a, int) and a >= size:
                self.error(f"dimension mismatch: b{a} needs dimension at least {a}")
        return size

    def letters(self) -> list:
        if self.at("-"):
            self.take("-")
            return []
        out = []
        while True:
            kind, tok, pos = self.peek()
            if kind == "name" and re.fullmatch(r"b\d+", tok):
                self.take()
                out.append((int(tok[1:]), self.exponent()))
            elif tok == "(":
                vec = self.vector()
                out.append((vec, self.exponent()))
            else:
                break
        return out

    def forest(self, k) -> LinComb:
        self.take("{")
        members: list[LinComb] = []
        markers: list = []
        if not self.at("}"):
            while True:
                members.append(self.monomial())
                if k is not None:
                    self.take("D")
                    markers.append(self.vector())
                if self.at(";"):
                    self.take(";")
                    continue
                break
        self.take("}")
        out: dict = {}
        for choice in itertools.product(*(list(m.items()) for m in members)):
            coeff = Fraction(1)
            keys = []
            for key, c in choice:
                coeff *= c
                keys.append(key)
            if k is not None:
                forest_key = SpdeForest(k, zip(keys, markers))
            elif self.mode == "ode":
                forest_key = OdeForest(keys)
            else:
                forest_key = SpdePlainForest(keys)
            out[forest_key] = out.get(forest_key, 0) + coeff
        return LinComb(out)


def parse(text: str, mode: str = "ode", dim: int | None = None) -> LinComb:
    """Parse a combination (or a single key, as a one-term combination).

    ``dim`` is ``d``: vectors must then have ``d + 1`` entries.
    """
    if mode not in ("ode", "spde"):
        raise ValueError(f"unknown mode {mode!r}")
    return _Parser(text, mode, dim).combination()
