# -*- coding: utf-8 -*-
# Copyright 2021-2023, Hojin Koh
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Source text to resolved, typed trees.

parseModel builds a Model; parseInvariant, parseLabeled, parseGprime and
parseConfiguration read the side files against an existing Model. All of
them collect every diagnostic they can before raising FrontendError.
"""

from pathlib import Path

from arpeggio import NoMatch, Terminal

from . import grammar as gr
from . import diagnostics as dg
from .diagnostics import Sink, Span, FrontendError
from .expr import (Ty, TInt, TBool, TTimer, TEnum, TObj, TSet, PHASE_ENUM,
        IntLit, BoolLit, EnumLit, NullLit, TimerOff, TimerOn, TimerActive, TimerLeft,
        SelfRef, Bound, Field, AllSet, PhaseRef, Old, Unary, Binary, Ite, Card, Quant,
        Assign, HavocStmt, If, QuantAssign, RefAssign, Assume, Assert,
        TRUE, mkAnd, mkOr, walk)
from .model import FieldDecl, EnumDecl, Transition, ClassDecl, SchedTrans, Scheduler, Constraint, Model, Configuration
from .logging import logger

TNull = Ty('null')
TAllUnion = Ty('all')

def _kids(node):
    """Children with anonymous structure flattened away."""
    aRslt = []
    for n in node:
        if isinstance(n, Terminal):
            if n.rule_name == 'EOF':
                continue
            aRslt.append(n)
        elif n.rule_name in gr.RULES:
            aRslt.append(n)
        else:
            aRslt.extend(_kids(n))
    return aRslt

def _sig(node):
    """Named children only; punctuation and keywords dropped."""
    if isinstance(node, Terminal):
        return []
    return [n for n in _kids(node) if n.rule_name in gr.RULES]

def _text(node):
    if isinstance(node, Terminal):
        return node.value
    return ' '.join(_text(n) for n in node)

class _Scope(object):
    def __init__(self, cls=None, bound=None):
        self.cls = cls
        self.bound = dict(bound or {})

    def bind(self, var, clsName):
        scope = _Scope(self.cls, self.bound)
        scope.bound[var] = clsName
        return scope

class _Builder(object):
    def __init__(self, parser, sink, model=None):
        self.parser = parser
        self.sink = sink
        self.enums = {}
        self.valueEnum = {}
        self.fields = {}
        self.phases = ()
        if model is not None:
            for e in model.enums:
                self.addEnum(e.name, e.values, None)
            self.addEnum(PHASE_ENUM, model.scheduler.phases, None)
            for c in model.classes:
                self.fields[c.name] = {f.name: f for f in c.fields}

    def span(self, node):
        line, col = self.parser.pos_to_linecol(node.position)
        return Span(self.sink.filename, node.position, node.position_end, line, col)

    def err(self, code, msg, node):
        self.sink.error(code, msg, self.span(node) if node is not None else None)
        return TRUE, None

    def addEnum(self, name, aValue, node):
        if name in self.enums:
            self.err(dg.DUPLICATE, "duplicate enum '{}'".format(name), node)
            return
        if len(set(aValue)) != len(aValue):
            self.err(dg.DUPLICATE, "duplicate value in enum '{}'".format(name), node)
        for v in aValue:
            if v in self.valueEnum and self.valueEnum[v] != name:
                self.err(dg.DUPLICATE, "enum value '{}' already belongs to '{}'".format(v, self.valueEnum[v]), node)
            else:
                self.valueEnum[v] = name
        self.enums[name] = tuple(aValue)

    def fieldOf(self, clsName, name):
        if name == 'executed':
            return FieldDecl('executed', TBool, 'executed')
        return self.fields.get(clsName, {}).get(name)

    @staticmethod
    def fieldType(fd):
        if fd.kind == 'event': return TBool
        if fd.kind == 'timer': return TTimer
        return fd.ty

    # Types

    def typeOf(self, node):
        aKid = _kids(node)
        head = aKid[0]
        if head.rule_name == 'setType':
            return self.classType(_sig(head)[0], TSet)
        if isinstance(head, Terminal) and head.value == 'Int':
            return TInt
        if isinstance(head, Terminal) and head.value == 'Bool':
            return TBool
        name = head.value
        if name in self.enums:
            return TEnum(name)
        if name in self.fields:
            return TObj(name)
        self.err(dg.UNKNOWN_NAME, "unknown type '{}'".format(name), head)
        return None

    def classType(self, node, mk):
        if node.value not in self.fields:
            self.err(dg.UNKNOWN_NAME, "unknown class '{}'".format(node.value), node)
            return None
        return mk(node.value)

    # Expressions

    def expr(self, node, scope):
        return getattr(self, '_x_' + node.rule_name)(node, scope)

    def boolExpr(self, node, scope):
        e, ty = self.expr(node, scope)
        if ty is not None and ty != TBool:
            self.err(dg.TYPE_ERROR, "expected Bool, got {}".format(ty), node)
        return e

    def _x_expr(self, node, scope):
        return self.expr(_sig(node)[0], scope)

    def _x_parenExpr(self, node, scope):
        return self.expr(_sig(node)[0], scope)

    def _x_intLit(self, node, scope):
        return IntLit(int(node.value), span=self.span(node)), TInt

    def _x_trueLit(self, node, scope):
        return BoolLit(True, span=self.span(node)), TBool

    def _x_falseLit(self, node, scope):
        return BoolLit(False, span=self.span(node)), TBool

    def _x_nullLit(self, node, scope):
        return NullLit(None, span=self.span(node)), TNull

    def _x_inactiveLit(self, node, scope):
        return TimerOff(span=self.span(node)), TTimer

    def _x_phaseExpr(self, node, scope):
        return PhaseRef(span=self.span(node)), TEnum(PHASE_ENUM)

    def _x_selfExpr(self, node, scope):
        if scope.cls is None:
            return self.err(dg.UNKNOWN_NAME, "'self' outside a class", node)
        return SelfRef(scope.cls, span=self.span(node)), TObj(scope.cls)

    def _x_allExpr(self, node, scope):
        aSig = _sig(node)
        if not aSig:
            return AllSet(None, span=self.span(node)), TAllUnion
        ty = self.classType(aSig[0], TSet)
        if ty is None:
            return TRUE, None
        return AllSet(ty.name, span=self.span(node)), ty

    def _x_ident(self, node, scope):
        name = node.value
        sp = self.span(node)
        if name in scope.bound:
            return Bound(name, scope.bound[name], span=sp), TObj(scope.bound[name])
        if scope.cls is not None:
            fd = self.fieldOf(scope.cls, name)
            if fd is not None:
                return Field(SelfRef(scope.cls, span=sp), scope.cls, name, span=sp), self.fieldType(fd)
        if name in self.valueEnum:
            return EnumLit(self.valueEnum[name], name, span=sp), TEnum(self.valueEnum[name])
        return self.err(dg.UNKNOWN_NAME, "unknown name '{}'".format(name), node)

    def _x_postfixExpr(self, node, scope):
        aSig = _sig(node)
        e, ty = self.expr(aSig[0], scope)
        for kid in aSig[1:]:
            if ty is None:
                return e, None
            name = kid.value
            sp = self.span(kid)
            if ty.kind == 'obj':
                fd = self.fieldOf(ty.name, name)
                if fd is None:
                    return self.err(dg.UNKNOWN_NAME, "class '{}' has no field '{}'".format(ty.name, name), kid)
                e, ty = Field(e, ty.name, name, span=sp), self.fieldType(fd)
            elif ty == TTimer and name == 'active':
                e, ty = TimerActive(e, span=sp), TBool
            elif ty == TTimer and name == 'remaining':
                e, ty = TimerLeft(e, span=sp), TInt
            else:
                return self.err(dg.TYPE_ERROR, "cannot select '{}' from {}".format(name, ty), kid)
        return e, ty

    def _x_oldExpr(self, node, scope):
        e, ty = self.expr(_sig(node)[0], scope)
        return Old(e, span=self.span(node)), ty

    def _x_cardExpr(self, node, scope):
        e, ty = self.expr(_sig(node)[0], scope)
        if ty is not None and ty.kind != 'set':
            return self.err(dg.TYPE_ERROR, "cardinality of non-set {}".format(ty), node)
        return Card(e, span=self.span(node)), TInt

    def _x_unaryExpr(self, node, scope):
        aSig = _sig(node)
        if len(aSig) == 1:
            return self.expr(aSig[0], scope)
        op = aSig[0].value
        e, ty = self.expr(aSig[1], scope)
        if ty is None:
            return e, None
        if op == '!':
            if ty != TBool:
                return self.err(dg.TYPE_ERROR, "'!' on {}".format(ty), node)
            return Unary('!', e, span=self.span(node)), TBool
        if ty != TInt:
            return self.err(dg.TYPE_ERROR, "'-' on {}".format(ty), node)
        if isinstance(e, IntLit):
            return IntLit(-e.value, span=self.span(node)), TInt
        return Unary('-', e, span=self.span(node)), TInt

    def _chain(self, node, scope):
        aSig = _sig(node)
        e, ty = self.expr(aSig[0], scope)
        for i in range(1, len(aSig), 2):
            e2, ty2 = self.expr(aSig[i + 1], scope)
            e, ty = self.binary(aSig[i].value, e, ty, e2, ty2, aSig[i])
        return e, ty

    _x_iffExpr = _chain
    _x_orExpr = _chain
    _x_andExpr = _chain
    _x_addExpr = _chain
    _x_mulExpr = _chain
    _x_cmpExpr = _chain

    def _x_impExpr(self, node, scope):
        aSig = _sig(node)
        e, ty = self.expr(aSig[0], scope)
        if len(aSig) == 1:
            return e, ty
        e2, ty2 = self.expr(aSig[2], scope)
        return self.binary('==>', e, ty, e2, ty2, aSig[1])

    def binary(self, op, a, tyA, b, tyB, node):
        sp = self.span(node)
        if tyA is None or tyB is None:
            return TRUE, None
        if op in ('&&', '||', '==>', '<==>'):
            if tyA != TBool or tyB != TBool:
                return self.err(dg.TYPE_ERROR, "'{}' needs Bool operands, got {} and {}".format(op, tyA, tyB), node)
            return Binary(op, a, b, span=sp), TBool
        if op in ('+', '-', '*'):
            if tyA == TInt and tyB == TInt:
                return Binary(op, a, b, span=sp), TInt
            if op == '+' and tyA.kind == 'set' and tyA == tyB:
                return Binary('union', a, b, span=sp), tyA
            return self.err(dg.TYPE_ERROR, "'{}' on {} and {}".format(op, tyA, tyB), node)
        if op in ('==', '!='):
            if tyA == TNull and tyB.kind == 'obj':
                a, tyA = NullLit(tyB.name, span=a.span), tyB
            if tyB == TNull and tyA.kind == 'obj':
                b, tyB = NullLit(tyA.name, span=b.span), tyA
            if tyA != tyB:
                return self.err(dg.TYPE_ERROR, "comparing {} with {}".format(tyA, tyB), node)
            return Binary(op, a, b, span=sp), TBool
        if op == '<=' and tyA.kind == 'set':
            if tyA != tyB:
                return self.err(dg.TYPE_ERROR, "subset of {} and {}".format(tyA, tyB), node)
            return Binary('subset', a, b, span=sp), TBool
        if op in ('<', '<=', '>', '>='):
            if tyA != TInt or tyB != TInt:
                return self.err(dg.TYPE_ERROR, "'{}' needs Int operands, got {} and {}".format(op, tyA, tyB), node)
            return Binary(op, a, b, span=sp), TBool
        if op == '!!':
            if tyA.kind != 'set' or tyA != tyB:
                return self.err(dg.TYPE_ERROR, "disjointness of {} and {}".format(tyA, tyB), node)
            return Binary('disjoint', a, b, span=sp), TBool
        if op == 'in':
            if tyB.kind != 'set' or tyA != TObj(tyB.name):
                return self.err(dg.TYPE_ERROR, "membership of {} in {}".format(tyA, tyB), node)
            return Binary('in', a, b, span=sp), TBool
        return self.err(dg.SYNTAX, "unknown operator '{}'".format(op), node)

    def _x_iteExpr(self, node, scope):
        aSig = _sig(node)
        c = self.boolExpr(aSig[0], scope)
        a, tyA = self.expr(aSig[1], scope)
        b, tyB = self.expr(aSig[2], scope)
        if tyA is None or tyB is None:
            return TRUE, None
        if tyA == TNull and tyB.kind == 'obj':
            a, tyA = NullLit(tyB.name), tyB
        if tyB == TNull and tyA.kind == 'obj':
            b, tyB = NullLit(tyA.name), tyA
        if tyA != tyB:
            return self.err(dg.TYPE_ERROR, "branches of if differ: {} and {}".format(tyA, tyB), node)
        return Ite(c, a, b, span=self.span(node)), tyA

    def rangeOf(self, node, scope):
        """Resolve a quantifier range; returns (rng, classes) or (None, None)."""
        rng, ty = self.expr(node, scope)
        if ty is None:
            return None, None
        if ty == TAllUnion:
            return None, list(self.fields)
        if ty.kind != 'set':
            self.err(dg.QUANT_RANGE, "quantifier range is {}, not a set".format(ty), node)
            return None, None
        return rng, [ty.name]

    def _x_quantExpr(self, node, scope):
        aSig = _sig(node)
        kind = aSig[0].value
        var = aSig[1].value
        rng, aCls = self.rangeOf(aSig[2], scope)
        if aCls is None:
            self.expr(aSig[3], scope.bind(var, None))
            return TRUE, None
        aQuant = []
        for clsName in aCls:
            body = self.boolExpr(aSig[3], scope.bind(var, clsName))
            aQuant.append(Quant(kind, var, clsName, rng if rng is not None else AllSet(clsName), body, span=self.span(node)))
        if len(aQuant) == 1:
            return aQuant[0], TBool
        return (mkAnd if kind == 'forall' else mkOr)(*aQuant), TBool

    # Statements

    def block(self, node, scope):
        return tuple(s for s in (self.stmt(k, scope) for k in _sig(node)) if s is not None)

    def branch(self, node, scope):
        if node.rule_name == 'block':
            return self.block(node, scope)
        s = self.stmt(node, scope)
        return (s,) if s is not None else ()

    def stmt(self, node, scope):
        return getattr(self, '_s_' + node.rule_name)(node, scope)

    def _s_ifStmt(self, node, scope):
        aSig = _sig(node)
        cond = self.boolExpr(aSig[0], scope)
        bThen = self.branch(aSig[1], scope)
        bElse = self.branch(aSig[2], scope) if len(aSig) > 2 else ()
        return If(cond, bThen, bElse, span=self.span(node))

    def _s_assumeStmt(self, node, scope):
        return Assume(self.boolExpr(_sig(node)[0], scope), span=self.span(node))

    def _s_assertStmt(self, node, scope):
        return Assert(self.boolExpr(_sig(node)[0], scope), span=self.span(node))

    def _s_assignStmt(self, node, scope):
        aSig = _sig(node)
        lhs = [k.value for k in _sig(aSig[0])]
        sp = self.span(node)
        if len(lhs) == 2 and lhs[0] == 'self':
            lhs = lhs[1:]
        if len(lhs) == 2:
            # Assignment through an object-valued field of self
            fdObj = self.fieldOf(scope.cls, lhs[0])
            if fdObj is None or fdObj.kind != 'ground':
                self.err(dg.QUANT_ASSIGN, "only own fields can be assigned directly ('{}')".format('.'.join(lhs)), aSig[0])
                return None
            target = fdObj.ty.name
            fd = self.fieldOf(target, lhs[1])
            if fd is None:
                self.err(dg.UNKNOWN_NAME, "class '{}' has no field '{}'".format(target, lhs[1]), aSig[0])
                return None
            rhs = self.rhs(aSig[1], fd, scope)
            obj = Field(SelfRef(scope.cls, span=sp), scope.cls, lhs[0], span=sp)
            return RefAssign(obj, target, lhs[1], rhs, span=sp)
        fd = self.fieldOf(scope.cls, lhs[0])
        if fd is None:
            self.err(dg.UNKNOWN_NAME, "class '{}' has no field '{}'".format(scope.cls, lhs[0]), aSig[0])
            return None
        if aSig[1].rule_name == 'havocRhs':
            return HavocStmt(lhs[0], span=sp)
        return Assign(lhs[0], self.rhs(aSig[1], fd, scope), span=sp)

    _s_bareAssign = _s_assignStmt

    def rhs(self, node, fd, scope):
        e, ty = self.expr(node, scope)
        tyWant = self.fieldType(fd)
        if ty is None or tyWant is None:
            return e
        if tyWant == TTimer and ty == TInt:
            return TimerOn(e, span=e.span)
        if ty == TNull and tyWant.kind == 'obj':
            return NullLit(tyWant.name, span=e.span)
        if ty != tyWant:
            self.err(dg.TYPE_ERROR, "assigning {} to '{}' of type {}".format(ty, fd.name, tyWant), node)
        return e

    def _s_quantAssign(self, node, scope):
        aSig = _sig(node)
        var = aSig[0].value
        rng, aCls = self.rangeOf(aSig[1], scope)
        if aCls is None:
            return None
        if rng is None:
            self.err(dg.QUANT_ASSIGN, "quantified assignment over All needs a class", aSig[1])
            return None
        lhs = [k.value for k in _sig(aSig[2])]
        if len(lhs) != 2 or lhs[0] != var:
            self.err(dg.QUANT_ASSIGN, "quantified assignment must assign {}.f".format(var), aSig[2])
            return None
        fd = self.fieldOf(aCls[0], lhs[1])
        if fd is None:
            self.err(dg.UNKNOWN_NAME, "class '{}' has no field '{}'".format(aCls[0], lhs[1]), aSig[2])
            return None
        rhs = self.rhs(aSig[3], fd, scope.bind(var, aCls[0]))
        return QuantAssign(var, aCls[0], rng, lhs[1], rhs, span=self.span(node))

    # Declarations

    def collectEnums(self, aEnum):
        for node in aEnum:
            aSig = _sig(node)
            self.addEnum(aSig[0].value, [k.value for k in aSig[1:]], node)

    def collectFields(self, node):
        aSig = _sig(node)
        name = aSig[0].value
        if name in self.fields:
            self.err(dg.DUPLICATE, "duplicate class '{}'".format(name), aSig[0])
            name = '{}#{}'.format(name, node.position)
        self.fields[name] = {}
        return name

    def fieldDecls(self, clsName, node):
        dictField = self.fields[clsName]
        aDecl = []
        declaresExecuted = False
        for m in _sig(node)[1:]:
            if m.rule_name == 'transitionDecl':
                continue
            aSig = _sig(m)
            name = aSig[0].value
            sp = self.span(m)
            kind = m.rule_name[:-4]
            if kind == 'var' and name == 'executed':
                declaresExecuted = True
                continue
            if name in dictField or name == 'executed':
                self.err(dg.DUPLICATE, "duplicate field '{}' in class '{}'".format(name, clsName), aSig[0])
                continue
            if kind in ('var', 'input', 'param'):
                ty = self.typeOf(aSig[1])
                if kind == 'param' and ty is not None and ty.kind == 'set':
                    self.err(dg.TYPE_ERROR, "parameter '{}' cannot be a set; use 'set'".format(name), m)
                fd = FieldDecl(name, ty, kind, span=sp)
            elif kind == 'event':
                fd = FieldDecl(name, TBool, 'event', span=sp)
            elif kind == 'timer':
                fd = FieldDecl(name, TTimer, 'timer', span=sp)
            elif kind == 'set':
                fd = FieldDecl(name, self.classType(_sig(aSig[1])[0], TSet), 'set', span=sp)
            else:
                nullable = any(k.rule_name == 'nullMark' for k in aSig)
                fd = FieldDecl(name, self.classType(aSig[1], TObj), 'ground', source=aSig[-1].value, nullable=nullable, span=sp)
            dictField[name] = fd
            aDecl.append((fd, m))
        return aDecl, declaresExecuted

    def initOf(self, clsName, fd, node):
        aSig = _sig(node)
        if len(aSig) < 3:
            return fd
        e = self.rhs(aSig[2], fd, _Scope())
        return FieldDecl(fd.name, fd.ty, fd.kind, init=e, span=fd.span)

    def transition(self, clsName, node, index):
        aSig = _sig(node)
        scope = _Scope(clsName)
        name = aSig[0].value
        fdLoc = self.fields[clsName].get('location')
        aLoc = self.enums.get(fdLoc.ty.name, ()) if fdLoc is not None and fdLoc.ty is not None and fdLoc.ty.kind == 'enum' else ()
        for k in (aSig[1], aSig[3]):
            if k.value not in aLoc:
                self.err(dg.BAD_LOCATION, "'{}' is not a location of class '{}'".format(k.value, clsName), k)
        if aSig[5].value not in self.phases:
            self.err(dg.UNKNOWN_NAME, "unknown phase '{}'".format(aSig[5].value), aSig[5])
        guard = self.boolExpr(aSig[2], scope)
        effect = self.block(aSig[4], scope)
        return Transition(name, aSig[1].value, guard, aSig[3].value, effect, aSig[5].value, index, span=self.span(node))

    def scheduler(self, node):
        aSig = _sig(node)
        phases = tuple(k.value for k in _sig(aSig[0]))
        initial = _sig(aSig[1])[0]
        final = _sig(aSig[2])[0]
        for k in (initial, final):
            if k.value not in phases:
                self.err(dg.UNKNOWN_NAME, "unknown phase '{}'".format(k.value), k)
        aTrans = []
        for i, t in enumerate(aSig[3:]):
            aT = _sig(t)
            for k in aT[:2]:
                if k.value not in phases:
                    self.err(dg.UNKNOWN_NAME, "unknown phase '{}'".format(k.value), k)
            guard = self.boolExpr(aT[2], _Scope())
            aTrans.append(SchedTrans(aT[0].value, aT[1].value, guard, i, span=self.span(t)))
        return Scheduler(phases, initial.value, final.value, tuple(aTrans), span=self.span(node))

    def labeled(self, aNode, scope):
        aRslt = []
        for i, node in enumerate(aNode):
            aSig = _sig(node)
            label = _sig(aSig[0])[0].value if aSig[0].rule_name == 'label' else None
            e = self.boolExpr(aSig[-1], scope)
            aRslt.append(Constraint(label or 'c{}'.format(i + 1), e, span=self.span(node)))
        return aRslt

    def model(self, root, source):
        aTop = _sig(root)
        self.collectEnums([n for n in aTop if n.rule_name == 'enumDecl'])
        aSched = [n for n in aTop if n.rule_name == 'schedulerDecl']
        if len(aSched) > 1:
            self.err(dg.DUPLICATE, "more than one scheduler", aSched[1])
        if aSched:
            self.phases = tuple(k.value for k in _sig(_sig(aSched[0])[0]))
            for p in self.phases:
                if p in self.valueEnum:
                    self.err(dg.DUPLICATE, "phase '{}' clashes with an enum value".format(p), aSched[0])
            self.addEnum(PHASE_ENUM, self.phases, aSched[0])
        aClsNode = [n for n in aTop if n.rule_name == 'classDecl']
        if not aClsNode:
            self.sink.error(dg.NO_CLASSES, "no class declarations", Span(self.sink.filename, 0, 0, 1, 1))
        aClsName = [self.collectFields(n) for n in aClsNode]
        aFields = [self.fieldDecls(name, n) for name, n in zip(aClsName, aClsNode)]

        aClass = []
        for name, node, (aDecl, declaresExecuted) in zip(aClsName, aClsNode, aFields):
            aFd = []
            for fd, m in aDecl:
                if fd.kind == 'var':
                    fd = self.initOf(name, fd, m)
                    self.fields[name][fd.name] = fd
                aFd.append(fd)
            aTrans = []
            setName = set()
            for m in _sig(node)[1:]:
                if m.rule_name != 'transitionDecl':
                    continue
                t = self.transition(name, m, len(aTrans))
                if t.name in setName:
                    self.err(dg.DUPLICATE, "duplicate transition '{}'".format(t.name), m)
                setName.add(t.name)
                aTrans.append(t)
            aClass.append(ClassDecl(name, tuple(aFd), tuple(aTrans), declaresExecuted, span=self.span(node)))

        if aSched:
            sched = self.scheduler(aSched[0])
        else:
            self.sink.error(dg.SCHEDULER, "no scheduler declaration", Span(self.sink.filename, 0, 0, 1, 1))
            sched = Scheduler((), None, None, ())
        aCons = []
        for n in aTop:
            if n.rule_name == 'constraintsDecl':
                aCons += self.labeled(_sig(n), _Scope())
        aEnum = tuple(EnumDecl(k, v) for k, v in self.enums.items() if k != PHASE_ENUM)
        return Model(aEnum, tuple(aClass), sched, tuple(aCons), source=source)

def _parse(root, text, sink):
    parser = gr.getParser(root)
    try:
        return parser, parser.parse(text)
    except NoMatch as e:
        line, col = parser.pos_to_linecol(e.position)
        sink.error(dg.SYNTAX, "syntax error: {}".format(e), Span(sink.filename, e.position, e.position, line, col))
        raise FrontendError(sink.aDiag)

def parseModel(text, filename=None):
    sink = Sink(filename)
    parser, tree = _parse(gr.modelFile, text, sink)
    model = _Builder(parser, sink).model(tree, filename)
    sink.raiseIfErrors()
    return model

def parseLabeled(text, model, filename=None):
    """Labelled closed formulas, one per `label: expr;` item."""
    sink = Sink(filename)
    parser, tree = _parse(gr.invFile, text, sink)
    aRslt = _Builder(parser, sink, model).labeled(_sig(tree), _Scope())
    for c in aRslt:
        for x in walk(c.expr):
            if isinstance(x, Old):
                sink.error(dg.OLD_IN_SOURCE, "old() is not allowed in an invariant", x.span)
                break
    sink.raiseIfErrors()
    return aRslt

def parseInvariant(text, model, filename=None):
    return mkAnd(*[c.expr for c in parseLabeled(text, model, filename)])

def parseGprime(text, model, filename=None):
    """Per (phase, class) local conditions; entries without a class apply to every class."""
    sink = Sink(filename)
    parser, tree = _parse(gr.gpFile, text, sink)
    builder = _Builder(parser, sink, model)
    dictRslt = {}
    for node in _sig(tree):
        aSig = _sig(node)
        phase = aSig[0].value
        if phase not in model.scheduler.phases:
            builder.err(dg.UNKNOWN_NAME, "unknown phase '{}'".format(phase), aSig[0])
            continue
        if len(aSig) == 3:
            if not model.hasClass(aSig[1].value):
                builder.err(dg.UNKNOWN_NAME, "unknown class '{}'".format(aSig[1].value), aSig[1])
                continue
            aCls = [aSig[1].value]
        else:
            aCls = model.classNames
        for clsName in aCls:
            e = builder.boolExpr(aSig[-1], _Scope(clsName))
            if any(isinstance(x, Old) for x in walk(e)):
                builder.err(dg.GPRIME_POST, "g' is a pre-state condition; old() is not allowed", aSig[-1])
            dictRslt[(phase, clsName)] = e
    sink.raiseIfErrors()
    return dictRslt

def _cfgValue(builder, model, cfg, node, fd, sink):
    sp = builder.span(node)
    rn = node.rule_name
    ty = fd.ty
    if fd.kind == 'set':
        if rn != 'cfgSet':
            sink.error(dg.CONFIG, "'{}' expects a set".format(fd.name), sp)
            return None
        setRslt = set()
        for k in _sig(node):
            if cfg.owner.get(k.value) != ty.name:
                sink.error(dg.CONFIG, "'{}' is not an instance of {}".format(k.value, ty.name), builder.span(k))
            setRslt.add(k.value)
        return frozenset(setRslt)
    if ty == TInt and rn == 'cfgInt':
        return int(node.value)
    if ty == TBool and rn in ('trueLit', 'falseLit'):
        return rn == 'trueLit'
    if ty.kind == 'enum' and rn == 'ident' and node.value in model.enum(ty.name).values:
        return node.value
    if ty.kind == 'obj' and rn == 'ident' and cfg.owner.get(node.value) == ty.name:
        return node.value
    sink.error(dg.CONFIG, "bad value '{}' for '{}' of type {}".format(_text(node), fd.name, ty), sp)
    return None

def parseConfiguration(text, model, filename=None):
    """A Configuration, with cfg.gamma holding (label, holds) for every constraint."""
    from .simulator import evaluate

    sink = Sink(filename)
    parser, tree = _parse(gr.cfgFile, text, sink)
    builder = _Builder(parser, sink, model)
    cfg = Configuration(model)
    aAssign = []
    for node in _sig(tree):
        aSig = _sig(node)
        if node.rule_name == 'cfgInst':
            clsName = aSig[0].value
            if not model.hasClass(clsName):
                sink.error(dg.CONFIG, "unknown class '{}'".format(clsName), builder.span(aSig[0]))
                continue
            for k in aSig[1:]:
                if k.value in cfg.owner:
                    sink.error(dg.CONFIG, "instance '{}' listed twice".format(k.value), builder.span(k))
                    continue
                cfg.addInstance(clsName, k.value)
        else:
            aAssign.append(aSig)
    for aSig in aAssign:
        inst, name = aSig[0].value, aSig[1].value
        if inst not in cfg.owner:
            sink.error(dg.CONFIG, "unknown instance '{}'".format(inst), builder.span(aSig[0]))
            continue
        fd = model.cls(cfg.owner[inst]).field(name)
        if fd is None or fd.kind not in ('set', 'param'):
            sink.error(dg.CONFIG, "'{}' is not a set or parameter of {}".format(name, cfg.owner[inst]), builder.span(aSig[1]))
            continue
        v = _cfgValue(builder, model, cfg, aSig[2], fd, sink)
        if fd.kind == 'set':
            cfg.sets[(inst, name)] = v if v is not None else frozenset()
        else:
            cfg.params[(inst, name)] = v
    for c in model.classes:
        for fd in c.fieldsOfKind('param'):
            for inst in cfg.universes[c.name]:
                if (inst, fd.name) not in cfg.params:
                    sink.error(dg.CONFIG, "parameter '{}.{}' is not set".format(inst, fd.name), None)
    sink.raiseIfErrors()
    cfg.deriveGrounded()
    for cons in model.constraints:
        ok = bool(evaluate(cons.expr, cfg, None))
        cfg.gamma.append((cons.label, ok))
        if not ok:
            logger.warning(str(dg.Diagnostic('warning', dg.GAMMA_FALSE,
                "constraint {} does not hold on this configuration".format(cons.label), Span(filename, 0, 0, 1, 1))))
    return cfg

def _read(path):
    return Path(path).read_text(encoding='utf-8')

def loadModel(path, check=True):
    from .checker import checkModel
    model = parseModel(_read(path), str(path))
    if check:
        checkModel(model)
    return model

def loadConfiguration(path, model):
    return parseConfiguration(_read(path), model, str(path))

def loadInvariant(path, model):
    return parseInvariant(_read(path), model, str(path))

def loadLabeled(path, model):
    return parseLabeled(_read(path), model, str(path))

def loadGprime(path, model):
    return parseGprime(_read(path), model, str(path))
