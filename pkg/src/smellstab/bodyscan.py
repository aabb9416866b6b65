"""Method-body analysis: resolved accesses, calls, creations, casts.

One scan per member body produces everything downstream consumers need:
dependency sites for the graph and the raw ingredients of the method metric
suite (cyclomatic count, nesting, accessed variables, foreign-data accesses,
called methods).  The scanner is a pragmatic statement-level recursive
descent; expressions are walked as receiver chains rather than parsed into
precedence trees, which is sufficient for call/create/cast/use extraction.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .lexer import PRIMITIVE_TYPES, Token
from .model import ArtifactId, ArtifactKind, MethodDecl, RelationKind, TypeDecl, external_artifact
from .parser import TypeRef, _Cursor, parse_type_ref
from .resolve import Resolver

_STATEMENT_KEYWORDS = {
    "if", "for", "while", "do", "switch", "try", "return", "throw", "break",
    "continue", "synchronized", "assert", "yield", "class", "interface", "enum",
}


@dataclass
class BodyFacts:
    cyclo: int = 1
    max_nesting: int = 0
    accessed_vars: set[str] = dc_field(default_factory=set)  # distinct variable identities
    own_fields: set[ArtifactId] = dc_field(default_factory=set)
    foreign_fields: set[ArtifactId] = dc_field(default_factory=set)  # direct + accessor-mediated
    direct_own_fields: set[ArtifactId] = dc_field(default_factory=set)  # declared on own family
    base_protected_used: set[ArtifactId] = dc_field(default_factory=set)
    internal_calls: set[ArtifactId] = dc_field(default_factory=set)
    sites: list[tuple[RelationKind, ArtifactId]] = dc_field(default_factory=list)


class _Scanner:
    def __init__(self, resolver: Resolver, scope: TypeDecl, type_params: frozenset[str]):
        self.r = resolver
        self.scope = scope
        self.own_top = resolver.top_level_of(scope.id.qualified_name)
        self.type_params = type_params
        self.facts = BodyFacts()
        self.scopes: list[dict[str, str]] = [{}]  # name -> raw declared type ("" unknown)
        self.protected_base = resolver.protected_base_members(scope)

    # -- bookkeeping ----------------------------------------------------------

    def push(self) -> None:
        self.scopes.append({})

    def pop(self) -> None:
        self.scopes.pop()

    def declare(self, name: str, raw_type: str) -> None:
        self.scopes[-1][name] = raw_type

    def local_type(self, name: str) -> str | None:
        for frame in reversed(self.scopes):
            if name in frame:
                return frame[name]
        return None

    def site(self, kind: RelationKind, target: ArtifactId | None) -> None:
        if target is not None:
            self.facts.sites.append((kind, target))

    def resolve_type(self, raw: str) -> ArtifactId | None:
        return self.r.resolve_type_name(raw, self.scope, self.type_params)

    def use_type(self, ref: TypeRef | None) -> ArtifactId | None:
        if ref is None:
            return None
        target = self.resolve_type(ref.name)
        self.site(RelationKind.USE, target)
        for arg in ref.args:
            self.site(RelationKind.USE, self.resolve_type(arg))
        return target

    def record_field_access(self, fdecl) -> None:
        declaring = fdecl.declaring_type.qualified_name
        self.facts.accessed_vars.add(fdecl.id.qualified_name)
        self.site(RelationKind.USE, fdecl.id)
        if self.r.is_own_type(self.scope, declaring):
            self.facts.own_fields.add(fdecl.id)
            if self.r.top_level_of(declaring) == self.own_top:
                self.facts.direct_own_fields.add(fdecl.id)
            if fdecl.id in self.protected_base:
                self.facts.base_protected_used.add(fdecl.id)
        else:
            self.facts.foreign_fields.add(fdecl.id)

    def record_call(self, mdecl: MethodDecl) -> None:
        self.facts.internal_calls.add(mdecl.id)
        self.site(RelationKind.CALL, mdecl.id)
        if mdecl.id in self.protected_base:
            self.facts.base_protected_used.add(mdecl.id)
        declaring = mdecl.declaring_type.qualified_name
        if mdecl.is_accessor and mdecl.accessor_field and not self.r.is_own_type(self.scope, declaring):
            backing = self.r.field_lookup(self.r.corpus.type_decl(declaring), mdecl.accessor_field)
            if backing is not None:
                self.facts.foreign_fields.add(backing.id)

    # -- statements -----------------------------------------------------------

    def scan_block_tokens(self, tokens: tuple[Token, ...], depth: int = 0) -> None:
        c = _Cursor(list(tokens))
        self.push()
        while not c.eof():
            self.statement(c, depth)
        self.pop()

    def statement(self, c: _Cursor, depth: int) -> None:
        self.facts.max_nesting = max(self.facts.max_nesting, depth)
        t = c.peek()
        if t is None:
            return
        v = t.value
        if v == ";":
            c.next()
            return
        if v == "{":
            self.block(c, depth)
            return
        if v == "if":
            self.if_statement(c, depth)
            return
        if v == "for":
            self.for_statement(c, depth)
            return
        if v == "while":
            c.next()
            self.facts.cyclo += 1
            self.paren_expr(c)
            self.statement(c, depth + 1)
            return
        if v == "do":
            c.next()
            self.facts.cyclo += 1
            self.statement(c, depth + 1)
            if c.at("while"):
                c.next()
                self.paren_expr(c)
            if c.at(";"):
                c.next()
            return
        if v == "switch":
            self.switch_statement(c, depth)
            return
        if v == "try":
            self.try_statement(c, depth)
            return
        if v in ("return", "throw", "yield", "assert"):
            c.next()
            self.expr(c, (";",))
            if c.at(";"):
                c.next()
            return
        if v in ("break", "continue"):
            c.next()
            if c.at_ident():
                c.next()
            if c.at(";"):
                c.next()
            return
        if v == "synchronized":
            c.next()
            if c.at("("):
                self.paren_expr(c)
            self.statement(c, depth + 1)
            return
        if v in ("class", "interface", "enum") or (v == "final" and c.peek(1) and c.peek(1).value == "class"):
            # local type declaration: opaque
            while not c.eof() and not c.at("{"):
                c.next()
            if c.at("{"):
                c.skip_balanced("{", "}")
            return
        if t.kind == "word" and t.value not in _STATEMENT_KEYWORDS:
            nxt = c.peek(1)
            if nxt is not None and nxt.value == ":" and not (c.peek(2) and c.peek(2).value == ":"):
                c.next(), c.next()  # label
                self.statement(c, depth)
                return
        if self.try_local_decl(c):
            return
        before = c.i
        self.expr(c, (";",))
        if c.at(";"):
            c.next()
        elif c.i == before and not c.eof():
            c.next()  # force progress on stray delimiters

    def block(self, c: _Cursor, depth: int) -> None:
        c.expect("{")
        self.push()
        while not c.eof() and not c.at("}"):
            self.statement(c, depth)
        if c.at("}"):
            c.next()
        self.pop()

    def if_statement(self, c: _Cursor, depth: int) -> None:
        c.expect("if")
        self.facts.cyclo += 1
        self.paren_expr(c)
        self.statement(c, depth + 1)
        if c.at("else"):
            c.next()
            if c.at("if"):
                self.if_statement(c, depth)  # else-if chain stays at this level
            else:
                self.statement(c, depth + 1)

    def for_statement(self, c: _Cursor, depth: int) -> None:
        c.expect("for")
        self.facts.cyclo += 1
        c.expect("(")
        self.push()
        header = self.capture_balanced_until(c, ")")
        self.scan_for_header(header)
        self.statement(c, depth + 1)
        self.pop()

    def scan_for_header(self, tokens: list[Token]) -> None:
        hc = _Cursor(tokens)
        colon = self._find_top_level(tokens, ":")
        semi = self._find_top_level(tokens, ";")
        if colon is not None and semi is None:  # enhanced for: no header semicolons
            if not self.try_local_decl(hc, stops=(":",)):
                self.expr(hc, (":",))
            if hc.at(":"):
                hc.next()
            self.expr(hc, ())
            return
        if not self.try_local_decl(hc, stops=(";",)):
            self.expr(hc, (";",))
        if hc.at(";"):
            hc.next()
        self.expr(hc, (";",))
        if hc.at(";"):
            hc.next()
        self.expr(hc, ())

    @staticmethod
    def _find_top_level(tokens: list[Token], value: str) -> int | None:
        depth = 0
        for i, t in enumerate(tokens):
            if t.value in ("(", "[", "{"):
                depth += 1
            elif t.value in (")", "]", "}"):
                depth -= 1
            elif depth == 0 and t.value == value:
                return i
        return None

    def switch_statement(self, c: _Cursor, depth: int) -> None:
        c.expect("switch")
        self.paren_expr(c)
        if not c.at("{"):
            return
        c.next()
        self.push()
        while not c.eof() and not c.at("}"):
            if c.at("case"):
                c.next()
                self.facts.cyclo += 1
                self.expr(c, (":", "->"))
            elif c.at("default"):
                c.next()
            else:
                self.statement(c, depth + 1)
                continue
            if c.at(":"):
                c.next()
            elif c.at("->"):
                c.next()
                self.statement(c, depth + 1)
        if c.at("}"):
            c.next()
        self.pop()

    def try_statement(self, c: _Cursor, depth: int) -> None:
        c.expect("try")
        self.push()
        if c.at("("):
            c.next()
            while not c.eof() and not c.at(")"):
                if not self.try_local_decl(c, stops=(";", ")")):
                    self.expr(c, (";", ")"))
                if c.at(";"):
                    c.next()
            if c.at(")"):
                c.next()
        if c.at("{"):
            self.block(c, depth + 1)
        self.pop()
        while c.at("catch"):
            c.next()
            self.facts.cyclo += 1
            self.push()
            if c.at("("):
                c.next()
                while c.at("final") or c.at("@"):
                    c.next()
                names: list[str] = []
                while True:
                    ref = parse_type_ref(c)
                    if ref is None:
                        break
                    self.use_type(ref)
                    names.append(ref.name)
                    if c.at("|"):
                        c.next()
                    else:
                        break
                if c.at_ident():
                    self.declare(c.next().value, names[0] if names else "")
                if c.at(")"):
                    c.next()
            if c.at("{"):
                self.block(c, depth + 1)
            self.pop()
        if c.at("finally"):
            c.next()
            if c.at("{"):
                self.block(c, depth + 1)

    def try_local_decl(self, c: _Cursor, stops: tuple[str, ...] = (";",)) -> bool:
        """Attempt ``[final] Type name [= init][, name2 ...]``; False restores."""
        start = c.i
        while c.at("final") or c.at("@"):
            if c.at("@"):
                c.next()
                if c.at_word():
                    c.next()
                if c.at("("):
                    c.skip_balanced("(", ")")
            else:
                c.next()
        ref = parse_type_ref(c)
        if ref is None or not c.at_ident():
            c.i = start
            return False
        name_tok = c.peek()
        follower = c.peek(1)
        if follower is None or follower.value not in ("=", ";", ",", ":", ")"):
            if not (follower is not None and follower.value == "[" and c.peek(2) and c.peek(2).value == "]"):
                c.i = start
                return False
        if follower is not None and follower.value == "=" and c.peek(2) and c.peek(2).value == "=":
            c.i = start  # '==' comparison, not a declaration
            return False
        self.use_type(ref)
        c.next()
        self.declare(name_tok.value, ref.name)
        while True:
            while c.at("[") and c.peek(1) and c.peek(1).value == "]":
                c.next(), c.next()
            if c.at("="):
                c.next()
                self.expr(c, (",",) + stops)
            if c.at(","):
                c.next()
                if c.at_ident():
                    self.declare(c.next().value, ref.name)
                continue
            break
        if c.at(";") and ";" in stops:
            c.next()
        return True

    # -- expressions ----------------------------------------------------------

    def paren_expr(self, c: _Cursor) -> None:
        if not c.at("("):
            return
        c.next()
        self.expr(c, (")",))
        if c.at(")"):
            c.next()

    def capture_balanced_until(self, c: _Cursor, close: str) -> list[Token]:
        depth = 0
        out: list[Token] = []
        while not c.eof():
            t = c.peek()
            if depth == 0 and t.value == close:
                c.next()
                return out
            if t.value in ("(", "[", "{"):
                depth += 1
            elif t.value in (")", "]", "}"):
                depth -= 1
            out.append(c.next())
        return out

    def expr(self, c: _Cursor, stops: tuple[str, ...]) -> None:
        """Scan an expression until a stop token at bracket depth zero."""
        ternary = 0
        while not c.eof():
            t = c.peek()
            if t.value == ":" and ternary > 0 and ":" not in stops:
                ternary -= 1
                c.next()
                continue
            if t.value in stops:
                return
            if t.value in (")", "]", "}", ",", ";", ":"):
                return  # caller's delimiter
            if t.value == "new":
                self.new_expression(c)
                continue
            if t.value == "(":
                self.paren_or_cast_or_lambda(c)
                continue
            if t.value in ("null", "true", "false"):
                c.next()
                continue
            if t.value in ("&&", "||", "?"):
                self.facts.cyclo += 1
                if t.value == "?":
                    ternary += 1
                c.next()
                continue
            if t.value == "instanceof":
                c.next()
                ref = parse_type_ref(c)
                if ref is not None:
                    self.use_type(ref)
                    if c.at_ident():  # pattern variable
                        self.declare(c.next().value, ref.name)
                continue
            if t.value == "switch":  # switch expression
                self.switch_statement(c, 0)
                continue
            if t.value == "{":  # array initializer
                c.next()
                while not c.eof() and not c.at("}"):
                    self.expr(c, (",", "}"))
                    if c.at(","):
                        c.next()
                if c.at("}"):
                    c.next()
                continue
            if t.value == "[":
                c.next()
                self.expr(c, ("]",))
                if c.at("]"):
                    c.next()
                continue
            if t.kind == "word" and (t.value not in _STATEMENT_KEYWORDS or t.value in ("this", "super")):
                if t.value in ("this", "super") or c.at_ident():
                    self.chain(c)
                    continue
            c.next()

    def new_expression(self, c: _Cursor) -> None:
        c.expect("new")
        ref = parse_type_ref(c)
        if ref is None:
            return
        if c.at("("):
            target = self.resolve_type(ref.name)
            self.site(RelationKind.CREATE, target)
            for arg in ref.args:
                self.site(RelationKind.USE, self.resolve_type(arg))
            self.scan_arguments(c)
            if c.at("{"):  # anonymous class body
                self.anonymous_body(c)
        else:
            self.use_type(ref)  # array creation
            while c.at("["):
                c.next()
                self.expr(c, ("]",))
                if c.at("]"):
                    c.next()
            if c.at("{"):
                c.next()
                while not c.eof() and not c.at("}"):
                    self.expr(c, (",", "}"))
                    if c.at(","):
                        c.next()
                if c.at("}"):
                    c.next()

    def anonymous_body(self, c: _Cursor) -> None:
        """Scan brace-blocks that follow a ')' inside an anonymous class body.

        Member signatures are skipped; method bodies merge into this member's
        facts (nested/anonymous work is attributed to the enclosing top-level
        type anyway).
        """
        tokens = []
        c.expect("{")
        depth = 1
        while depth and not c.eof():
            t = c.next()
            if t.value == "{":
                depth += 1
            elif t.value == "}":
                depth -= 1
            if depth:
                tokens.append(t)
        i = 0
        while i < len(tokens):
            if tokens[i].value == "{" and i > 0 and tokens[i - 1].value == ")":
                bal = 1
                j = i + 1
                while j < len(tokens) and bal:
                    if tokens[j].value == "{":
                        bal += 1
                    elif tokens[j].value == "}":
                        bal -= 1
                    j += 1
                self.scan_block_tokens(tuple(tokens[i + 1 : j - 1]), depth=0)
                i = j
            else:
                i += 1

    def paren_or_cast_or_lambda(self, c: _Cursor) -> None:
        start = c.i
        inner = []
        c.next()
        depth = 0
        while not c.eof():
            t = c.peek()
            if depth == 0 and t.value == ")":
                break
            if t.value in ("(", "[", "{"):
                depth += 1
            elif t.value in (")", "]", "}"):
                depth -= 1
            inner.append(c.next())
        if c.at(")"):
            c.next()
        nxt = c.peek()
        if nxt is not None and nxt.value == "->":
            c.next()
            self.push()
            self.lambda_params(inner)
            if c.at("{"):
                self.block(c, 0)
            else:
                self.expr(c, (",", ")", ";"))
            self.pop()
            return
        cast_target = self.as_cast_target(inner, nxt)
        if cast_target is not None:
            self.site(RelationKind.CAST, cast_target[0])
            for arg in cast_target[1]:
                self.site(RelationKind.USE, self.resolve_type(arg))
            return
        sub = _Cursor(inner)
        while not sub.eof():
            self.expr(sub, ())
            if not sub.eof():
                sub.next()

    def lambda_params(self, tokens: list[Token]) -> None:
        hc = _Cursor(tokens)
        while not hc.eof():
            ref = parse_type_ref(hc)
            if ref is not None and hc.at_ident():
                self.use_type(ref)
                self.declare(hc.next().value, ref.name)
            elif hc.at_ident():
                self.declare(hc.next().value, "")
            else:
                hc.next()
            if hc.at(","):
                hc.next()

    def as_cast_target(self, inner: list[Token], nxt: Token | None):
        """Classify ``( inner )`` as a cast; None when it reads as grouping."""
        if nxt is None or not inner:
            return None
        starts_operand = (
            nxt.kind in ("word", "number", "string", "char") and nxt.value not in _STATEMENT_KEYWORDS
        ) or nxt.value in ("(", "!", "~")
        if nxt.kind == "word" and nxt.value in ("this", "super", "new", "null", "true", "false"):
            starts_operand = True
        if not starts_operand:
            return None
        hc = _Cursor(inner)
        ref = parse_type_ref(hc)
        if ref is None or not hc.eof():
            return None
        if ref.name in PRIMITIVE_TYPES:
            return (None, ())  # primitive cast: consume, no artifact
        if "." not in ref.name and not ref.args and ref.dims == 0:
            if self.local_type(ref.name) is not None:
                return None  # (x) copy of a local, not a cast
            target = self.resolve_type(ref.name)
            if target is None:
                return None
            if target.is_external and not ref.name[:1].isupper():
                return None  # lowercase unknown simple name: grouping
            return (target, ref.args)
        return (self.resolve_type(ref.name), ref.args)

    def scan_arguments(self, c: _Cursor) -> int:
        """Scan a parenthesized argument list, returning the argument count."""
        c.expect("(")
        argc = 0
        if not c.at(")"):
            argc = 1
            while not c.eof() and not c.at(")"):
                self.expr(c, (",", ")"))
                if c.at(","):
                    c.next()
                    argc += 1
        if c.at(")"):
            c.next()
        return argc

    # -- receiver chains ------------------------------------------------------

    def chain(self, c: _Cursor) -> None:
        """Scan ``head(.segment)*`` resolving calls and field accesses."""
        t = c.next()
        ctx_type: TypeDecl | None = None  # internal type of the current value/receiver
        ctx_external: str | None = None
        if t.value == "this":
            ctx_type = self.scope
            if c.at("("):
                argc = self.scan_arguments(c)
                target = self.r.constructor_lookup(self.scope, argc)
                if target is not None:
                    self.record_call(target)
                return
        elif t.value == "super":
            sup = self.scope.superclass
            if c.at("("):
                argc = self.scan_arguments(c)
                if sup is not None and not sup.is_external:
                    target = self.r.constructor_lookup(self.r.corpus.type_decl(sup.qualified_name), argc)
                    if target is not None:
                        self.record_call(target)
                    else:
                        self.site(RelationKind.CALL, external_artifact(
                            f"{sup.qualified_name}.<init>", ArtifactKind.CONSTRUCTOR))
                elif sup is not None:
                    self.site(RelationKind.CALL, external_artifact(
                        f"{sup.qualified_name}.<init>", ArtifactKind.CONSTRUCTOR))
                return
            if sup is not None and not sup.is_external:
                ctx_type = self.r.corpus.type_decl(sup.qualified_name)
            else:
                ctx_external = sup.qualified_name if sup is not None else "super"
        else:
            name = t.value
            if c.at("->"):  # single-parameter lambda
                c.next()
                self.push()
                self.declare(name, "")
                if c.at("{"):
                    self.block(c, 0)
                else:
                    self.expr(c, (",", ")", ";"))
                self.pop()
                return
            if c.at("("):
                argc = self.scan_arguments(c)
                target = self.r.find_visible_method(self.scope, name, argc)
                if target is not None:
                    self.record_call(target)
                    ctx_type, ctx_external = self.result_context(target)
                else:
                    self.site(RelationKind.CALL, external_artifact(name, ArtifactKind.METHOD))
                    ctx_external = ""
            else:
                local = self.local_type(name)
                if local is not None:
                    self.facts.accessed_vars.add(f"${name}")
                    ctx_type, ctx_external = self.type_context(local)
                else:
                    fdecl = self.r.find_visible_field(self.scope, name)
                    if fdecl is not None:
                        self.record_field_access(fdecl)
                        ctx_type, ctx_external = self.type_context(
                            fdecl.type_name, scope=self.r.declaring_type_of_member(fdecl.id))
                    else:
                        resolved = self.resolve_type(name)
                        if resolved is not None and not resolved.is_external:
                            ctx_type = self.r.corpus.type_decl(resolved.qualified_name)
                        elif name[:1].isupper() and resolved is not None:
                            ctx_external = resolved.qualified_name
                        else:
                            # unknown bare name (static import?): count the access
                            self.facts.accessed_vars.add(f"${name}")
                            ctx_external = ""
        while True:
            if c.at("::"):
                c.next()
                if c.at_word() or c.at("new"):
                    ref_name = c.next().value
                    if ctx_type is not None:
                        if ref_name == "new":
                            self.site(RelationKind.CREATE, ctx_type.id)
                        else:
                            target = self.r.method_lookup(ctx_type, ref_name, -1) or self.r.method_lookup(
                                ctx_type, ref_name, 0)
                            if target is not None:
                                self.record_call(target)
                return
            if not (c.at(".") and c.peek(1) is not None and c.peek(1).kind == "word"):
                return
            c.next()
            seg = c.next().value
            if seg == "class":
                if ctx_type is not None:
                    self.site(RelationKind.USE, ctx_type.id)
                return
            if seg == "this" or seg == "super":
                continue  # qualified this/super: keep context
            if c.at("("):
                argc = self.scan_arguments(c)
                if ctx_type is not None:
                    target = self.r.method_lookup(ctx_type, seg, argc)
                    if target is not None:
                        self.record_call(target)
                        ctx_type, ctx_external = self.result_context(target)
                    else:
                        self.site(RelationKind.CALL, external_artifact(
                            f"{ctx_type.id.qualified_name}.{seg}", ArtifactKind.METHOD))
                        ctx_type, ctx_external = None, ""
                else:
                    base = f"{ctx_external}." if ctx_external else ""
                    self.site(RelationKind.CALL, external_artifact(f"{base}{seg}", ArtifactKind.METHOD))
                continue
            if ctx_type is not None:
                fdecl = self.r.field_lookup(ctx_type, seg)
                if fdecl is not None:
                    self.record_field_access(fdecl)
                    ctx_type, ctx_external = self.type_context(
                        fdecl.type_name, scope=self.r.declaring_type_of_member(fdecl.id))
                    continue
                nested = self.r.nested_type_named(ctx_type, seg)
                if nested is not None:
                    ctx_type = nested
                    continue
                ctx_type, ctx_external = None, ""
            # external context: nothing to record for plain member hops

    def result_context(self, m: MethodDecl) -> tuple[TypeDecl | None, str | None]:
        if m.is_constructor:
            return self.r.corpus.type_decl(m.declaring_type.qualified_name), None
        return self.type_context(m.return_type, scope=self.r.declaring_type_of_member(m.id), tp=m.type_params)

    def type_context(
        self, raw: str, scope: TypeDecl | None = None, tp: tuple[str, ...] = ()
    ) -> tuple[TypeDecl | None, str | None]:
        if not raw or raw.rstrip("[]") in PRIMITIVE_TYPES:
            return None, ""
        resolved = self.r.resolve_type_name(raw, scope if scope is not None else self.scope, frozenset(tp))
        if resolved is None:
            return None, ""
        if resolved.is_external:
            return None, resolved.qualified_name
        return self.r.corpus.type_decl(resolved.qualified_name), None


def scan_member_body(
    resolver: Resolver,
    scope: TypeDecl,
    member: MethodDecl,
) -> BodyFacts:
    """Analyze a method/constructor body; abstract members get empty facts."""
    type_params = frozenset(member.type_params)
    scanner = _Scanner(resolver, scope, type_params)
    for raw_type, name in member.params:
        scanner.declare(name, raw_type)
    if member.body is None:
        scanner.facts.cyclo = 0
        return scanner.facts
    scanner.scan_block_tokens(member.body, depth=0)
    return scanner.facts


def scan_initializer(resolver: Resolver, scope: TypeDecl, tokens: tuple[Token, ...]) -> BodyFacts:
    scanner = _Scanner(resolver, scope, frozenset())
    scanner.scan_block_tokens(tokens, depth=0)
    return scanner.facts


def scan_expression(resolver: Resolver, scope: TypeDecl, tokens: tuple[Token, ...]) -> BodyFacts:
    """Scan a bare initializer expression (field initializers)."""
    scanner = _Scanner(resolver, scope, frozenset())
    c = _Cursor(list(tokens))
    while not c.eof():
        scanner.expr(c, ())
        if not c.eof():
            c.next()
    return scanner.facts
