"""A line-oriented batch language over the workbench.

::

    group G = symmetric(3)
    sub H = generate(G; (1 2))
    action C = conjugation(G)
    ext E = semidirect(C)
    core normal H
    check higgins G

Statements end at a newline and ``#`` comments run to the end of the line.
Element words inside ``generate`` are element indices, or permutations in
1-based cycle notation when the group was built by ``symmetric`` or
``alternating``; adjacent cycles multiply into a single element, with the
rightmost cycle applied first.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Sequence

from selab.actions import (
    BAction,
    SplitExtension,
    action_core,
    action_from_hom,
    conjugation_action,
    semidirect_product,
    split_extension_core,
    trivial_action,
)
from selab.catalog import build_entry
from selab.errors import InputError, ValidationError
from selab.groups import FiniteGroup, automorphism_group
from selab.lattice import Subgroup, generate, normal_core
from selab import omega, theorems

# -- errors and tokens -----------------------------------------------------------


class ScriptError(InputError):
    """Lexical, syntax or binding error at a source position."""

    def __init__(self, kind: str, line: int, col: int, message: str, expected: Sequence[str] = ()):
        self.kind = kind
        self.line = line
        self.col = col
        self.expected = tuple(sorted(set(expected)))
        exp = f"; expected one of {', '.join(self.expected)}" if self.expected else ""
        super().__init__(f"{kind} error at {line}:{col}: {message}{exp}")


@dataclass(frozen=True)
class Token:
    kind: str  # NAME INT STRING NEWLINE EOF or the punctuation itself
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<comment>#[^\n]*)|(?P<newline>\n)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>\d+)|(?P<string>\"[^\"\n]*\")"
    r"|(?P<punct>[(),;=])"
)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise ScriptError("lexical", line, col, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        if kind == "newline":
            tokens.append(Token("NEWLINE", "\n", line, col))
            line, line_start = line + 1, m.end()
        elif kind in ("name", "int", "string"):
            tokens.append(Token(kind.upper(), m.group(), line, col))
        elif kind == "punct":
            tokens.append(Token(m.group(), m.group(), line, col))
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


# -- syntax tree -----------------------------------------------------------------


@dataclass(frozen=True)
class Spec:
    """Constructor term such as ``direct_product(cyclic(2), symmetric(3))``."""

    name: str
    args: tuple = ()  # ints, strings (quoted) or nested Specs
    bare: bool = True  # written without parentheses

    def text(self) -> str:
        if self.bare and not self.args:
            return self.name
        return f"{self.name}(" + ", ".join(a.text() if isinstance(a, Spec) else str(a) for a in self.args) + ")"


@dataclass(frozen=True)
class Cycle:
    points: tuple[int, ...]


@dataclass(frozen=True)
class Word:
    """One element: an index or a product of cycles."""

    index: int | None = None
    cycles: tuple[Cycle, ...] = ()

    def text(self) -> str:
        if self.index is not None:
            return str(self.index)
        return "".join("(" + " ".join(map(str, c.points)) + ")" for c in self.cycles)


@dataclass(frozen=True)
class Stmt:
    line: int = field(default=0, compare=False, kw_only=True)
    col: int = field(default=0, compare=False, kw_only=True)


@dataclass(frozen=True)
class GroupDef(Stmt):
    name: str
    spec: Spec

    def text(self) -> str:
        return f"group {self.name} = {self.spec.text()}"


@dataclass(frozen=True)
class SubDef(Stmt):
    name: str
    group: str
    words: tuple[Word, ...]

    def text(self) -> str:
        words = " ".join(w.text() for w in self.words)
        return f"sub {self.name} = generate({self.group}; {words})" if words else f"sub {self.name} = generate({self.group};)"


@dataclass(frozen=True)
class ActionDef(Stmt):
    name: str
    kind: str  # conjugation | trivial | hom
    groups: tuple[str, ...]
    images: tuple[int, ...] = ()

    def text(self) -> str:
        args = ", ".join(self.groups)
        if self.kind == "hom":
            args += "; " + " ".join(map(str, self.images))
        return f"action {self.name} = {self.kind}({args})"


@dataclass(frozen=True)
class ExtDef(Stmt):
    name: str
    action: str

    def text(self) -> str:
        return f"ext {self.name} = semidirect({self.action})"


@dataclass(frozen=True)
class CoreQuery(Stmt):
    kind: str  # normal | action | split
    args: tuple[str, ...]

    def text(self) -> str:
        return " ".join(("core", self.kind) + self.args)


@dataclass(frozen=True)
class CheckCall(Stmt):
    check: str
    args: tuple[str, ...]

    def text(self) -> str:
        return " ".join(("check", self.check) + self.args)


@dataclass(frozen=True)
class Script:
    statements: tuple[Stmt, ...] = ()

    def __len__(self) -> int:
        return len(self.statements)

    def bindings(self) -> dict[str, str]:
        return _binding_kinds(self.statements)


def _binding_kinds(stmts: Sequence[Stmt]) -> dict[str, str]:
    kinds = {GroupDef: "group", SubDef: "sub", ActionDef: "action", ExtDef: "ext"}
    return {s.name: kinds[type(s)] for s in stmts if type(s) in kinds}


def print_script(script: Script) -> str:
    """Canonical text: one statement per line, single spaces, no comments."""
    return "".join(s.text() + "\n" for s in script.statements)


# -- checks and cores reachable from scripts ---------------------------------------

CORE_KINDS: dict[str, tuple[str, ...]] = {
    "normal": ("sub",),
    "action": ("sub", "action"),
    "split": ("sub", "ext"),
}


def _intersections(K: Subgroup, B: Subgroup) -> list[theorems.CheckReport]:
    X = K.parent
    return [theorems.check_intersections_binary(X, K, B), theorems.check_intersections_family(X, K, B)]


def _commutator_chains(X: FiniteGroup) -> list[theorems.CheckReport]:
    return [theorems.check_commutator_join(X, ch) for ch in theorems.normal_chains(X)]


def _generate_oracle(X: FiniteGroup) -> list[theorems.CheckReport]:
    return [theorems.check_generate_oracle(X, [[x] for x in X] + [list(X.generators)])]


# name -> (argument kinds, runner returning reports)
CHECKS: dict[str, tuple[tuple[str, ...], Callable[..., list]]] = {
    "higgins": (("group",), lambda X: [theorems.check_higgins_normality(X)]),
    "join_normals": (("group",), lambda X: [theorems.check_join_normals_normal(X)]),
    "three_subobjects": (("group",), lambda X: [theorems.check_three_subobjects(X)]),
    "normal_core_oracle": (("group",), lambda X: [theorems.check_normal_core_oracle(X)]),
    "commutator_join": (("group",), _commutator_chains),
    "generate_oracle": (("group",), _generate_oracle),
    "clots": (("sub",), lambda N: [theorems.check_clots(N)]),
    "normal_core_pullback": (("sub",), lambda S: [theorems.check_normal_core_pullback(S)]),
    "intersections": (("sub", "sub"), _intersections),
    "kernel_geometric": (("ext",), lambda E: [theorems.scan_kernel_geometric(E)]),
    "core_terminality": (("ext",), lambda E: [theorems.check_core_terminality(E)]),
    "core_adjunction": (("ext",), lambda E: [theorems.check_core_adjunction(E)]),
    "action_core_oracles": (("ext",), lambda E: [theorems.check_action_core_oracles(E)]),
    "omega_witness": ((), lambda: [omega.verify_witness()]),
}


# -- parser ----------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.kinds: dict[str, str] = {}

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def fail(self, expected: Sequence[str], tok: Token | None = None) -> ScriptError:
        tok = tok or self.tok
        found = "end of input" if tok.kind == "EOF" else "end of line" if tok.kind == "NEWLINE" else repr(tok.text)
        return ScriptError("syntax", tok.line, tok.col, f"unexpected {found}", expected)

    def expect(self, kind: str, text: str | None = None) -> Token:
        tok = self.tok
        if tok.kind != kind or (text is not None and tok.text != text):
            raise self.fail([text or kind])
        self.i += 1
        return tok

    def accept(self, kind: str) -> Token | None:
        if self.tok.kind == kind:
            self.i += 1
            return self.toks[self.i - 1]
        return None

    # binding discipline

    def use(self, tok: Token, *allowed: str) -> str:
        kind = self.kinds.get(tok.text)
        if kind is None:
            raise ScriptError("binding", tok.line, tok.col, f"{tok.text!r} used before definition")
        if allowed and kind not in allowed:
            raise ScriptError("binding", tok.line, tok.col, f"{tok.text!r} is a {kind}, need {' or '.join(allowed)}")
        return tok.text

    def bind(self, tok: Token, kind: str) -> str:
        if tok.text in self.kinds:
            raise ScriptError("binding", tok.line, tok.col, f"{tok.text!r} is already bound")
        self.kinds[tok.text] = kind
        return tok.text

    # grammar

    def script(self) -> Script:
        stmts = []
        while self.tok.kind != "EOF":
            if self.accept("NEWLINE"):
                continue
            stmts.append(self.statement())
            if not self.accept("NEWLINE") and self.tok.kind != "EOF":
                raise self.fail(["end of line"])
        return Script(tuple(stmts))

    def statement(self) -> Stmt:
        tok = self.tok
        keyword = tok.text if tok.kind == "NAME" else None
        rule = {
            "group": self.group_def,
            "sub": self.sub_def,
            "action": self.action_def,
            "ext": self.ext_def,
            "core": self.core_query,
            "check": self.check_call,
        }.get(keyword)
        if rule is None:
            raise self.fail(["group", "sub", "action", "ext", "core", "check"])
        self.i += 1
        stmt = rule()
        object.__setattr__(stmt, "line", tok.line)
        object.__setattr__(stmt, "col", tok.col)
        return stmt

    def _lhs(self) -> Token:
        name = self.expect("NAME")
        self.expect("=")
        return name

    def group_def(self) -> GroupDef:
        name = self._lhs()
        spec_tok = self.tok
        spec = self.spec()
        try:
            build_entry(spec.text())
        except InputError as exc:
            raise ScriptError("syntax", spec_tok.line, spec_tok.col, f"bad group spec: {exc}") from None
        return GroupDef(self.bind(name, "group"), spec)

    def spec(self) -> Spec:
        name = self.expect("NAME").text
        if not self.accept("("):
            return Spec(name)
        args = []
        if not self.accept(")"):
            while True:
                if self.tok.kind == "INT":
                    args.append(int(self.expect("INT").text))
                elif self.tok.kind == "STRING":
                    args.append(self.expect("STRING").text)
                elif self.tok.kind == "NAME":
                    args.append(self.spec())
                else:
                    raise self.fail(["INT", "NAME", "STRING"])
                if self.accept(")"):
                    break
                if not self.accept(","):
                    raise self.fail([",", ")"])
        return Spec(name, tuple(args), bare=False)

    def sub_def(self) -> SubDef:
        name = self._lhs()
        self.expect("NAME", "generate")
        self.expect("(")
        group = self.use(self.expect("NAME"), "group")
        self.expect(";")
        words = []
        while not self.accept(")"):
            if self.tok.kind == "INT":
                words.append(Word(index=int(self.expect("INT").text)))
            elif self.tok.kind == "(":
                cycles = []
                while self.accept("("):
                    points = [int(self.expect("INT").text)]
                    while not self.accept(")"):
                        if self.tok.kind != "INT":
                            raise self.fail(["INT", ")"])
                        points.append(int(self.expect("INT").text))
                    cycles.append(Cycle(tuple(points)))
                words.append(Word(cycles=tuple(cycles)))
            else:
                raise self.fail(["INT", "(", ")"])
        return SubDef(self.bind(name, "sub"), group, tuple(words))

    def action_def(self) -> ActionDef:
        name = self._lhs()
        kind_tok = self.expect("NAME")
        arity = {"conjugation": 1, "trivial": 2, "hom": 2}.get(kind_tok.text)
        if arity is None:
            raise self.fail(["conjugation", "trivial", "hom"], kind_tok)
        self.expect("(")
        groups = [self.use(self.expect("NAME"), "group")]
        for _ in range(arity - 1):
            self.expect(",")
            groups.append(self.use(self.expect("NAME"), "group"))
        images = []
        if kind_tok.text == "hom":
            self.expect(";")
            while self.tok.kind == "INT":
                images.append(int(self.expect("INT").text))
        self.expect(")")
        return ActionDef(self.bind(name, "action"), kind_tok.text, tuple(groups), tuple(images))

    def ext_def(self) -> ExtDef:
        name = self._lhs()
        self.expect("NAME", "semidirect")
        self.expect("(")
        act = self.use(self.expect("NAME"), "action")
        self.expect(")")
        return ExtDef(self.bind(name, "ext"), act)

    def _args(self, kinds: Sequence[str]) -> tuple[str, ...]:
        args = []
        for kind in kinds:
            args.append(self.use(self.expect("NAME"), kind))
        return tuple(args)

    def core_query(self) -> CoreQuery:
        kind_tok = self.expect("NAME")
        if kind_tok.text not in CORE_KINDS:
            raise self.fail(list(CORE_KINDS), kind_tok)
        return CoreQuery(kind_tok.text, self._args(CORE_KINDS[kind_tok.text]))

    def check_call(self) -> CheckCall:
        name_tok = self.expect("NAME")
        if name_tok.text not in CHECKS:
            raise self.fail(list(CHECKS), name_tok)
        return CheckCall(name_tok.text, self._args(CHECKS[name_tok.text][0]))


def parse_script(text: str) -> Script:
    return _Parser(text).script()


# -- interpreter -------------------------------------------------------------------


@dataclass
class ScriptResult:
    outputs: list[str] = field(default_factory=list)
    reports: list[theorems.CheckReport] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.reports)


def _word_element(G: FiniteGroup, spec: Spec, w: Word, stmt: Stmt) -> int:
    if w.index is not None:
        if not 0 <= w.index < G.order:
            raise ScriptError("binding", stmt.line, stmt.col, f"element {w.index} out of range for {G.label}")
        return w.index
    if spec.name not in ("symmetric", "alternating"):
        raise ScriptError("binding", stmt.line, stmt.col, "cycle notation needs a symmetric or alternating group")
    n = spec.args[0]
    perm = list(range(n))
    for cycle in reversed(w.cycles):
        pts = [p - 1 for p in cycle.points]
        if any(not 0 <= p < n for p in pts) or len(set(pts)) != len(pts):
            raise ScriptError("binding", stmt.line, stmt.col, f"bad cycle {cycle.points} on {n} points")
        step = {a: b for a, b in zip(pts, pts[1:] + pts[:1])}
        perm = [step.get(perm[i], perm[i]) for i in range(n)]
    try:
        return G.index(tuple(perm))
    except (KeyError, ValueError):
        raise ScriptError("binding", stmt.line, stmt.col, f"{w.text()} is not in {G.label}") from None


def run_script(script: Script | str) -> ScriptResult:
    if isinstance(script, str):
        script = parse_script(script)
    env: dict[str, object] = {}
    specs: dict[str, Spec] = {}
    res = ScriptResult()
    for st in script.statements:
        try:
            if isinstance(st, GroupDef):
                env[st.name] = build_entry(st.spec.text()).group
                specs[st.name] = st.spec
                res.outputs.append(f"{st.name}: {env[st.name].label}, order {env[st.name].order}")
            elif isinstance(st, SubDef):
                G = env[st.group]
                H = generate(G, [_word_element(G, specs[st.group], w, st) for w in st.words])
                env[st.name] = H
                res.outputs.append(f"{st.name} = {list(H.elems)} in {G.label}")
            elif isinstance(st, ActionDef):
                gs = [env[g] for g in st.groups]
                if st.kind == "conjugation":
                    act = conjugation_action(gs[0])
                elif st.kind == "trivial":
                    act = trivial_action(gs[0], gs[1])
                else:
                    act = action_from_hom(st.images, automorphism_group(gs[1], force=True), B=gs[0])
                env[st.name] = act
                res.outputs.append(f"{st.name}: {act.B.label} acting on {act.X.label}")
            elif isinstance(st, ExtDef):
                ext = semidirect_product(env[st.action])
                env[st.name] = ext
                res.outputs.append(f"{st.name}: {ext.describe()}")
            elif isinstance(st, CoreQuery):
                res.outputs.append(_core(st, env))
            elif isinstance(st, CheckCall):
                reports = CHECKS[st.check][1](*(env[a] for a in st.args))
                res.reports.extend(reports)
                res.outputs.extend(r.line() for r in reports)
        except ScriptError:
            raise
        except (InputError, ValidationError) as exc:
            raise ScriptError("binding", st.line, st.col, str(exc)) from None
    return res


def _core(st: CoreQuery, env: dict) -> str:
    S = env[st.args[0]]
    if st.kind == "normal":
        C = normal_core(S, force=True)
    elif st.kind == "action":
        act: BAction = env[st.args[1]]
        if S.parent != act.X:
            raise InputError(f"{st.args[0]} is not a subgroup of the acted-on group")
        C = action_core(S, act)
    else:
        ext: SplitExtension = env[st.args[1]]
        core = split_extension_core(S, ext, verify=True)
        return f"core split {st.args[0]}: kernel {list(core.kernel.elems)}, middle {list(core.middle.elems)} in {ext.A.label}"
    return f"core {st.kind} {st.args[0]}: {list(C.elems)}"
