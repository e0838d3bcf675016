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

"""SMT-LIB 2.6 text for models and formulas.

Classes become uninterpreted sorts with an `All.C` membership predicate,
set fields become binary predicates, mutable fields get a post-state
function `C.f` and a pre-state twin `old.C.f`. Bound variables are written
`?x` and task constants `$c`, so neither can clash with a declared symbol.
"""

import itertools
import re

from .diagnostics import EncodingError
from .expr import (TInt, TBool, TTimer, PHASE_ENUM, IntLit, BoolLit, EnumLit, NullLit, TimerOff, TimerOn, TimerActive,
        TimerLeft, SelfRef, ObjConst, Bound, AllSet, PhaseRef, Field, Old, Unary, Binary, Ite, Card, Quant, walk)

CARD_BOUND = 4

_FLIP = {'<': '>', '<=': '>=', '>': '<', '>=': '<=', '==': '==', '!=': '!='}
_ARITH = {'+': '+', '-': '-', '*': '*', '<': '<', '<=': '<=', '>': '>', '>=': '>='}

def objConsts(e):
    return sorted({(x.name, x.cls) for x in walk(e) if isinstance(x, ObjConst)})

class SmtWriter(object):
    def __init__(self, model, cardBound=CARD_BOUND):
        self.model = model
        self.cardBound = cardBound
        self._n = itertools.count()

    def fresh(self, base='w'):
        return '?{}!{}'.format(base, next(self._n))

    def sortOf(self, ty):
        if ty == TInt: return 'Int'
        if ty == TBool: return 'Bool'
        if ty == TTimer: return 'Timer'
        if ty.kind in ('enum', 'obj'): return ty.name
        raise EncodingError("Type {} has no sort".format(ty))

    def fieldDecl(self, cls, name):
        fd = self.model.cls(cls).field(name)
        if fd is None:
            raise EncodingError("Unknown field {}.{}".format(cls, name))
        return fd

    @staticmethod
    def fieldSym(cls, name, vintage='post'):
        return '{}{}.{}'.format('old.' if vintage == 'pre' else '', cls, name)

    # Declarations

    def preamble(self, withGamma=True):
        aLine = ['(set-option :produce-models true)', '(set-logic ALL)',
            '(declare-datatypes ((Timer 0)) (((Timer.inactive) (Timer.active (Timer.remaining Int)))))']
        for e in list(self.model.enums) + [self.model.enum(PHASE_ENUM)]:
            aLine.append('(declare-datatypes (({} 0)) (({})))'.format(
                e.name, ' '.join('({}.{})'.format(e.name, v) for v in e.values)))
        for c in self.model.classes:
            aLine.append('(declare-sort {} 0)'.format(c.name))
            aLine.append('(declare-fun All.{0} ({0}) Bool)'.format(c.name))
            aLine.append('(declare-const null.{} {})'.format(c.name, c.name))
            aLine.append('(assert (not (All.{0} null.{0})))'.format(c.name))
        for c in self.model.classes:
            for fd in c.stateFields:
                sort = self.sortOf(fd.ty)
                for v in ('post', 'pre'):
                    aLine.append('(declare-fun {} ({}) {})'.format(self.fieldSym(c.name, fd.name, v), c.name, sort))
            for fd in c.fieldsOfKind('param', 'ground'):
                aLine.append('(declare-fun {} ({}) {})'.format(self.fieldSym(c.name, fd.name), c.name, self.sortOf(fd.ty)))
            for fd in c.fieldsOfKind('set'):
                sym = self.fieldSym(c.name, fd.name)
                aLine.append('(declare-fun {} ({} {}) Bool)'.format(sym, c.name, fd.ty.name))
                aLine.append('(assert (forall ((?o {}) (?x {})) (=> ({} ?o ?x) (All.{} ?x))))'.format(
                    c.name, fd.ty.name, sym, fd.ty.name))
        aLine.append('(declare-const phase {})'.format(PHASE_ENUM))
        aLine.append('(declare-const old.phase {})'.format(PHASE_ENUM))
        if withGamma:
            for cons in self.model.constraints:
                aLine.append('; {}'.format(cons.label))
                aLine.append('(assert {})'.format(self.term(cons.expr)))
        return aLine

    def query(self, formula, aExtra=(), withGamma=True):
        """Script checking validity of `formula`: its negation is asserted."""
        aLine = self.preamble(withGamma)
        for name, cls in objConsts(formula):
            aLine.append('(declare-const ${} {})'.format(name, cls))
        aLine += list(aExtra)
        aLine.append('(assert (not {}))'.format(self.term(formula)))
        aLine += ['(check-sat)', '(get-model)', '(get-info :all-statistics)']
        return '\n'.join(aLine) + '\n'

    # Terms

    def term(self, e, vintage='post', syms=None):
        """SMT term for `e`. With `syms`, mutable reads use those symbols instead of the post-state."""
        return self._t(e, vintage, syms)

    def _t(self, e, v, syms):
        if isinstance(e, IntLit):
            return str(e.value) if e.value >= 0 else '(- {})'.format(-e.value)
        if isinstance(e, BoolLit):
            return 'true' if e.value else 'false'
        if isinstance(e, EnumLit):
            return '{}.{}'.format(e.enum, e.value)
        if isinstance(e, NullLit):
            if e.cls is None:
                raise EncodingError("Untyped null")
            return 'null.{}'.format(e.cls)
        if isinstance(e, TimerOff):
            return 'Timer.inactive'
        if isinstance(e, TimerOn):
            # Starting with k <= 0 leaves the timer inactive
            if isinstance(e.e, IntLit):
                return '(Timer.active {})'.format(e.e.value) if e.e.value > 0 else 'Timer.inactive'
            k = self._t(e.e, v, syms)
            return '(ite (> {0} 0) (Timer.active {0}) Timer.inactive)'.format(k)
        if isinstance(e, TimerActive):
            return '((_ is Timer.active) {})'.format(self._t(e.e, v, syms))
        if isinstance(e, TimerLeft):
            return '(Timer.remaining {})'.format(self._t(e.e, v, syms))
        if isinstance(e, ObjConst):
            return '${}'.format(e.name)
        if isinstance(e, Bound):
            return '?{}'.format(e.name)
        if isinstance(e, SelfRef):
            raise EncodingError("'self' must be instantiated before encoding")
        if isinstance(e, PhaseRef):
            return 'old.phase' if v == 'pre' else 'phase'
        if isinstance(e, Field):
            fd = self.fieldDecl(e.cls, e.name)
            if fd.kind == 'set':
                raise EncodingError("Set field {}.{} used as a value".format(e.cls, e.name))
            if fd.kind in ('param', 'ground'):
                sym = self.fieldSym(e.cls, e.name)
            elif syms is not None:
                sym = syms.get((e.cls, e.name), self.fieldSym(e.cls, e.name, 'pre'))
            else:
                sym = self.fieldSym(e.cls, e.name, v)
            return '({} {})'.format(sym, self._t(e.obj, v, syms))
        if isinstance(e, Old):
            return self._t(e.e, 'pre', syms)
        if isinstance(e, Unary):
            return '({} {})'.format('not' if e.op == '!' else '-', self._t(e.e, v, syms))
        if isinstance(e, Ite):
            return '(ite {} {} {})'.format(self._t(e.c, v, syms), self._t(e.a, v, syms), self._t(e.b, v, syms))
        if isinstance(e, Quant):
            x = '?{}'.format(e.var)
            m = self.member(x, e.rng, v, syms)
            body = self._t(e.body, v, syms)
            if e.kind == 'forall':
                return '(forall (({} {})) (=> {} {}))'.format(x, e.cls, m, body)
            return '(exists (({} {})) (and {} {}))'.format(x, e.cls, m, body)
        if isinstance(e, Binary):
            return self._binary(e, v, syms)
        if isinstance(e, Card):
            raise EncodingError("Cardinality is supported only in comparisons with an integer literal")
        raise EncodingError("Cannot encode {!r}".format(e))

    def _binary(self, e, v, syms):
        op = e.op
        if op in ('==', '!=', '<', '<=', '>', '>='):
            if isinstance(e.a, Card) and isinstance(e.b, IntLit):
                return self.card(e.a.e, op, e.b.value, v, syms)
            if isinstance(e.b, Card) and isinstance(e.a, IntLit):
                return self.card(e.b.e, _FLIP[op], e.a.value, v, syms)
        if op in ('==', '!=') and self.isSet(e.a):
            z = self.fresh('z')
            eq = '(forall (({} {})) (= {} {}))'.format(z, self.elemClass(e.a), self.member(z, e.a, v, syms), self.member(z, e.b, v, syms))
            return eq if op == '==' else '(not {})'.format(eq)
        if op == 'in':
            return self.member(self._t(e.a, v, syms), e.b, v, syms)
        if op == 'subset':
            z = self.fresh('z')
            return '(forall (({} {})) (=> {} {}))'.format(z, self.elemClass(e.a), self.member(z, e.a, v, syms), self.member(z, e.b, v, syms))
        if op == 'disjoint':
            z = self.fresh('z')
            return '(forall (({} {})) (not (and {} {})))'.format(z, self.elemClass(e.a), self.member(z, e.a, v, syms), self.member(z, e.b, v, syms))
        if op == 'union':
            raise EncodingError("Set union used as a value")
        a, b = self._t(e.a, v, syms), self._t(e.b, v, syms)
        if op == '&&': return '(and {} {})'.format(a, b)
        if op == '||': return '(or {} {})'.format(a, b)
        if op == '==>': return '(=> {} {})'.format(a, b)
        if op in ('<==>', '=='): return '(= {} {})'.format(a, b)
        if op == '!=': return '(not (= {} {}))'.format(a, b)
        return '({} {} {})'.format(_ARITH[op], a, b)

    # Sets

    def isSet(self, e):
        if isinstance(e, AllSet):
            return True
        if isinstance(e, Field):
            return self.fieldDecl(e.cls, e.name).kind == 'set'
        if isinstance(e, Binary):
            return e.op == 'union'
        if isinstance(e, Ite):
            return self.isSet(e.a)
        if isinstance(e, Old):
            return self.isSet(e.e)
        return False

    def elemClass(self, e):
        if isinstance(e, AllSet):
            return e.cls
        if isinstance(e, Field):
            return self.fieldDecl(e.cls, e.name).ty.name
        if isinstance(e, (Binary, Ite)):
            return self.elemClass(e.a)
        if isinstance(e, Old):
            return self.elemClass(e.e)
        raise EncodingError("Not a set: {!r}".format(e))

    def member(self, x, e, v, syms):
        """Membership of the term `x` in the set expression `e`."""
        if isinstance(e, AllSet):
            return '(All.{} {})'.format(e.cls, x)
        if isinstance(e, Field):
            fd = self.fieldDecl(e.cls, e.name)
            if fd.kind != 'set':
                raise EncodingError("Quantifier range {}.{} is not a set".format(e.cls, e.name))
            return '({} {} {})'.format(self.fieldSym(e.cls, e.name), self._t(e.obj, v, syms), x)
        if isinstance(e, Binary) and e.op == 'union':
            return '(or {} {})'.format(self.member(x, e.a, v, syms), self.member(x, e.b, v, syms))
        if isinstance(e, Ite):
            return '(ite {} {} {})'.format(self._t(e.c, v, syms), self.member(x, e.a, v, syms), self.member(x, e.b, v, syms))
        if isinstance(e, Old):
            return self.member(x, e.e, 'pre', syms)
        raise EncodingError("Cannot encode membership in {!r}".format(e))

    def atLeast(self, e, n, v, syms):
        if n <= 0:
            return 'true'
        if n > self.cardBound:
            raise EncodingError("Cardinality bound {} exceeds the expansion bound {}".format(n, self.cardBound))
        cls = self.elemClass(e)
        aW = [self.fresh('w') for _ in range(n)]
        aConj = [self.member(w, e, v, syms) for w in aW]
        if n >= 2:
            aConj.append('(distinct {})'.format(' '.join(aW)))
        return '(exists ({}) (and {}))'.format(' '.join('({} {})'.format(w, cls) for w in aW), ' '.join(aConj))

    def atMost(self, e, n, v, syms):
        if n < 0:
            return 'false'
        return '(not {})'.format(self.atLeast(e, n + 1, v, syms))

    def card(self, e, op, k, v, syms):
        if op == '>=': return self.atLeast(e, k, v, syms)
        if op == '>': return self.atLeast(e, k + 1, v, syms)
        if op == '<=': return self.atMost(e, k, v, syms)
        if op == '<': return self.atMost(e, k - 1, v, syms)
        eq = '(and {} {})'.format(self.atLeast(e, k, v, syms), self.atMost(e, k, v, syms))
        return eq if op == '==' else '(not {})'.format(eq)

# Solver output

_reUniverse = re.compile(r';; universe for (\S+):\s*;;\s*([^\n]*)')
_reConst = re.compile(r'\(define-fun (\$\S+|phase|old\.phase) \(\) \S+\s+([^\s()]+)\)')
_reSteps = re.compile(r':rlimit-count\s+(\d+)')

def parseStatus(stdout):
    """sat, unsat, unknown or error; the first verdict line wins."""
    status = None
    for line in stdout.splitlines():
        line = line.strip()
        if line in ('sat', 'unsat', 'unknown'):
            return line
        if not status and line.startswith('(error '):
            status = 'error'
    return status or 'error'

def parseCounterModel(stdout):
    """Universes and task constants of a sat answer."""
    dictUniverse = {m.group(1): m.group(2).split() for m in _reUniverse.finditer(stdout)}
    dictConst = {m.group(1).lstrip('$'): m.group(2) for m in _reConst.finditer(stdout)}
    return {'universes': dictUniverse, 'constants': dictConst}

def parseSteps(stdout):
    m = _reSteps.search(stdout)
    return int(m.group(1)) if m else None
