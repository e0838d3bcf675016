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

"""Source-form printing. parseModel(printModel(m)) == m for every checked model."""

from .expr import (IntLit, BoolLit, EnumLit, NullLit, TimerOff, TimerOn, TimerActive, TimerLeft, SelfRef, ObjConst,
        Bound, AllSet, PhaseRef, Havoc, Field, Old, Unary, Binary, Ite, Card, Quant, Lambda,
        Assign, HavocStmt, If, QuantAssign, RefAssign, Assume, Assert)

_OPS = {'union': '+', 'subset': '<=', 'disjoint': '!!'}

# Binding strength; 0 never appears unparenthesised below the top
_PREC = {'<==>': 1, '==>': 2, '||': 3, '&&': 4,
        '==': 5, '!=': 5, '<': 5, '<=': 5, '>': 5, '>=': 5, 'in': 5, 'subset': 5, 'disjoint': 5,
        '+': 6, '-': 6, 'union': 6, '*': 7}
_UNARY = 8
_POSTFIX = 9

def _prec(e):
    if isinstance(e, Binary):
        return _PREC[e.op]
    if isinstance(e, (Quant, Ite, Lambda)):
        return 0
    if isinstance(e, Unary):
        return _UNARY
    if isinstance(e, IntLit) and e.value < 0:
        return _UNARY
    if isinstance(e, TimerOn):
        return _prec(e.e)
    return _POSTFIX

class Printer(object):
    def __init__(self, aBound=()):
        self.setBound = set(aBound)

    def sub(self, e, need):
        s = self.expr(e)
        return '({})'.format(s) if _prec(e) < need else s

    def scoped(self, var, fn):
        had = var in self.setBound
        self.setBound.add(var)
        try:
            return fn()
        finally:
            if not had:
                self.setBound.discard(var)

    def expr(self, e):
        if isinstance(e, IntLit):
            return str(e.value)
        if isinstance(e, BoolLit):
            return 'true' if e.value else 'false'
        if isinstance(e, EnumLit):
            return e.value
        if isinstance(e, NullLit):
            return 'null'
        if isinstance(e, TimerOff):
            return 'inactive'
        if isinstance(e, TimerOn):
            return self.expr(e.e)
        if isinstance(e, SelfRef):
            return 'self'
        if isinstance(e, (ObjConst, Bound)):
            return e.name
        if isinstance(e, AllSet):
            return 'All' if e.cls is None else 'All<{}>'.format(e.cls)
        if isinstance(e, PhaseRef):
            return 'phase'
        if isinstance(e, Havoc):
            return '*'
        if isinstance(e, TimerActive):
            return '{}.active'.format(self.sub(e.e, _POSTFIX))
        if isinstance(e, TimerLeft):
            return '{}.remaining'.format(self.sub(e.e, _POSTFIX))
        if isinstance(e, Field):
            if isinstance(e.obj, SelfRef) and e.name not in self.setBound:
                return e.name
            return '{}.{}'.format(self.sub(e.obj, _POSTFIX), e.name)
        if isinstance(e, Old):
            return 'old({})'.format(self.expr(e.e))
        if isinstance(e, Card):
            return '|{}|'.format(self.expr(e.e))
        if isinstance(e, Unary):
            s = self.sub(e.e, _UNARY)
            # `!!` lexes as disjointness
            return '{}{}{}'.format(e.op, ' ' if s[:1] in '!-' else '', s)
        if isinstance(e, Binary):
            p = _PREC[e.op]
            op = _OPS.get(e.op, e.op)
            if e.op == '==>':
                return '{} {} {}'.format(self.sub(e.a, p + 1), op, self.sub(e.b, p))
            if p == 5:
                return '{} {} {}'.format(self.sub(e.a, p + 1), op, self.sub(e.b, p + 1))
            return '{} {} {}'.format(self.sub(e.a, p), op, self.sub(e.b, p + 1))
        if isinstance(e, Ite):
            return 'if {} then {} else {}'.format(self.sub(e.c, 1), self.sub(e.a, 1), self.sub(e.b, 1))
        if isinstance(e, Quant):
            rng = self.sub(e.rng, 6)
            return self.scoped(e.var, lambda: '{} {} in {} : {}'.format(e.kind, e.var, rng, self.expr(e.body)))
        if isinstance(e, Lambda):
            return self.scoped(e.var, lambda: 'fun {} : {} => {}'.format(e.var, e.cls, self.expr(e.body)))
        raise TypeError("Cannot print {!r}".format(e))

    def stmts(self, aStmt, indent):
        return ''.join(self.stmt(s, indent) for s in aStmt)

    def block(self, aStmt, indent):
        if not aStmt:
            return '{ }'
        return '{{\n{}{}}}'.format(self.stmts(aStmt, indent + 1), '  ' * indent)

    def stmt(self, s, indent):
        pad = '  ' * indent
        if isinstance(s, Assign):
            return '{}{} := {};\n'.format(pad, s.name, self.expr(s.rhs))
        if isinstance(s, HavocStmt):
            return '{}{} := *;\n'.format(pad, s.name)
        if isinstance(s, RefAssign):
            return '{}{}.{} := {};\n'.format(pad, self.expr(s.obj), s.name, self.expr(s.rhs))
        if isinstance(s, QuantAssign):
            rng = self.sub(s.rng, 6)
            rhs = self.scoped(s.var, lambda: self.expr(s.rhs))
            return '{}forall {} in {} {{ {}.{} := {}; }}\n'.format(pad, s.var, rng, s.var, s.name, rhs)
        if isinstance(s, If):
            txt = '{}if {} then {}'.format(pad, self.expr(s.cond), self.block(s.then, indent))
            if s.orelse:
                txt += ' else {}'.format(self.block(s.orelse, indent))
            return txt + '\n'
        if isinstance(s, Assume):
            return '{}assume {};\n'.format(pad, self.expr(s.e))
        if isinstance(s, Assert):
            return '{}assert {};\n'.format(pad, self.expr(s.e))
        raise TypeError("Cannot print {!r}".format(s))

def printExpr(e, aBound=()):
    return Printer(aBound).expr(e)

def printStmts(aStmt, indent=0):
    return Printer().stmts(aStmt, indent)

def _field(fd):
    if fd.kind == 'var':
        init = ' = {}'.format(printExpr(fd.init)) if fd.init is not None else ''
        return 'var {} : {}{};'.format(fd.name, fd.ty, init)
    if fd.kind in ('input', 'param', 'set'):
        return '{} {} : {};'.format(fd.kind, fd.name, fd.ty)
    if fd.kind in ('event', 'timer'):
        return '{} {};'.format(fd.kind, fd.name)
    return 'ground {} : {}{} from {};'.format(fd.name, fd.ty.name, '?' if fd.nullable else '', fd.source)

def printClass(cls):
    aLine = ['class {} {{'.format(cls.name)]
    if cls.declaresExecuted:
        aLine.append('  var executed : Bool;')
    for fd in cls.fields:
        aLine.append('  ' + _field(fd))
    pr = Printer()
    for t in cls.transitions:
        aLine.append('  transition {} = ({}, {}, {}, {}, {});'.format(
            t.name, t.start, pr.expr(t.guard), t.end, pr.block(t.effect, 1), t.phase))
    aLine.append('}')
    return '\n'.join(aLine)

def printScheduler(sched):
    aLine = ['scheduler {',
        '  phases {};'.format(', '.join(sched.phases)),
        '  initial {};'.format(sched.initial),
        '  final {};'.format(sched.final)]
    for t in sched.transitions:
        aLine.append('  trans {} -> {} when {};'.format(t.src, t.dst, printExpr(t.guard)))
    aLine.append('}')
    return '\n'.join(aLine)

def printLabeled(aCons, indent=0):
    pad = '  ' * indent
    return ''.join('{}{}: {};\n'.format(pad, c.label, printExpr(c.expr)) for c in aCons)

def printModel(model):
    aPart = ['enum {} {{ {} }}'.format(e.name, ', '.join(e.values)) for e in model.enums]
    aPart += [printClass(c) for c in model.classes]
    aPart.append(printScheduler(model.scheduler))
    if model.constraints:
        aPart.append('constraints {{\n{}}}'.format(printLabeled(model.constraints, 1)))
    return '\n\n'.join(aPart) + '\n'
