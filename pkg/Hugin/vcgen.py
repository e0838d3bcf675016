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

"""Verification tasks: the global entailment checks and the local contract checks.

Every task carries a closed formula whose validity is wanted, plus the
SMT-LIB script asserting its negation. Task constants `c` and `d` stand
for arbitrary instances.
"""

import itertools
import json
from dataclasses import dataclass, field, asdict

from .diagnostics import ContractError
from .expr import (TTimer, ObjConst, Bound, SelfRef, AllSet, PhaseRef, EnumLit, Field, Old, Binary, Quant, PHASE_ENUM,
        Assign, HavocStmt, If, QuantAssign, RefAssign, Assume, Assert,
        instantiate, freshName, mkAnd, mkNot, mkImplies, mkEq)
from .model import writeFootprint, phaseFunctionFields
from .contractgen import execContract, initContract, tickContract, unchangedAll, atLocation
from .smtlib import SmtWriter, CARD_BOUND

ESTABLISHMENT = 'establishment'
STABILITY = 'stability'
SELFLOOP = 'selfloop'
INIT = 'init'
PHASE_NONFINAL = 'phase_nonfinal'
PHASE_FINAL = 'phase_final'
RESET = 'reset'
PROPERTY = 'property'
LOCAL = 'local'
LEMMA = 'lemma'

VALID = 'Valid'
INVALID = 'Invalid'
UNKNOWN = 'Unknown'
TIMEOUT = 'Timeout'

@dataclass
class VerificationTask:
    id: str
    kind: str
    formula: object = field(repr=False)
    smt: str = field(default='', repr=False)
    cls: str = None
    phase: str = None
    edge: tuple = None

@dataclass
class VcResult:
    taskId: str
    verdict: str
    wallTime: float = 0.0
    solver: str = ''
    model: dict = None
    steps: int = None
    stderr: str = ''
    timeout: float = None

    def toJson(self):
        return asdict(self)

    @classmethod
    def fromJson(cls, obj):
        return cls(**obj)

    @classmethod
    def load(cls, path):
        with open(path, 'r', encoding='utf-8') as fp:
            return cls.fromJson(json.load(fp))

def phaseIs(p, old=False):
    e = mkEq(PhaseRef(), EnumLit(PHASE_ENUM, p))
    return Old(e) if old else e

def inAll(obj):
    return Binary('in', obj, AllSet(obj.cls))

def forEach(cls, fn):
    """forall x in All<cls> : fn(x)"""
    v = freshName('x')
    return Quant('forall', v, cls, AllSet(cls), fn(Bound(v, cls)))

def schedGuard(sched, t):
    """Scheduler guard with every earlier guard from the same phase negated."""
    aEarlier = [u.guard for u in sched.outgoing(t.src) if u.index < t.index]
    return mkAnd(t.guard, *[mkNot(g) for g in aEarlier])

def defaultGprime(cls):
    return mkNot(Field(SelfRef(cls.name), cls.name, 'executed'))

def frames(model, cls, phase, obj):
    """Everything one exec of `obj` in `phase` cannot touch stays put."""
    aConj = [mkEq(PhaseRef(), Old(PhaseRef()))]
    setFoot = writeFootprint(cls, phase)
    setFn = phaseFunctionFields(cls, phase)
    for klass in model.classes:
        for fd in klass.stateFields:
            key = (klass.name, fd.name)
            if key not in setFoot:
                aConj.append(unchangedAll(klass.name, fd.name))
            elif klass.name == cls.name and key not in setFn:
                def other(x, name=fd.name):
                    f = Field(x, cls.name, name)
                    return mkImplies(Binary('!=', x, obj), mkEq(f, Old(f)))
                aConj.append(forEach(cls.name, other))
    return mkAnd(*aConj)

def allExecutedReset(model):
    return mkAnd(*[forEach(c.name, lambda x, c=c: mkNot(Field(x, c.name, 'executed'))) for c in model.classes])

def allUnchanged(model, kinds):
    aConj = []
    for c in model.classes:
        for fd in c.stateFields:
            if fd.kind in kinds:
                aConj.append(unchangedAll(c.name, fd.name))
    return mkAnd(*aConj)

class _Builder(object):
    def __init__(self, model, cardBound):
        self.model = model
        self.writer = SmtWriter(model, cardBound)
        self.aTask = []

    def add(self, tid, kind, formula, aExtra=(), **kwargs):
        smt = self.writer.query(formula, aExtra)
        self.aTask.append(VerificationTask(tid, kind, formula, smt, **kwargs))

def buildChecks(model, inv, prop, gprime=None, cardBound=CARD_BOUND, propertyPhase=None):
    """All global entailment checks for invariant `inv` and property `prop`."""
    gprime = gprime or {}
    sched = model.scheduler
    b = _Builder(model, cardBound)

    def gp(p, cls, obj):
        return instantiate(gprime.get((p, cls.name), defaultGprime(cls)), obj)

    for tSelf in [t for t in sched.transitions if t.selfLoop]:
        p = tSelf.src
        gSelf = schedGuard(sched, tSelf)
        for cls in model.classes:
            c = ObjConst('c', cls.name)
            b.add('{}_{}_{}'.format(ESTABLISHMENT, cls.name, p), ESTABLISHMENT,
                mkImplies(mkAnd(inv, phaseIs(p), gSelf, inAll(c)), gp(p, cls, c)), cls=cls.name, phase=p)
            for other in model.classes:
                d = ObjConst('d', other.name)
                aHyp = [Old(mkAnd(inv, phaseIs(p), gp(p, cls, c), gp(p, other, d))), inAll(c), inAll(d)]
                if other.name == cls.name:
                    aHyp.append(Binary('!=', c, d))
                aHyp.append(instantiate(execContract(other, p, model).formula, d))
                aHyp.append(frames(model, other, p, d))
                b.add('{}_{}.{}_{}'.format(STABILITY, cls.name, other.name, p), STABILITY,
                    mkImplies(mkAnd(*aHyp), gp(p, cls, c)), cls=cls.name, phase=p)
            aHyp = [Old(mkAnd(inv, phaseIs(p), gp(p, cls, c))), inAll(c),
                instantiate(execContract(cls, p, model).formula, c), frames(model, cls, p, c)]
            b.add('{}_{}_{}'.format(SELFLOOP, cls.name, p), SELFLOOP, mkImplies(mkAnd(*aHyp), inv), cls=cls.name, phase=p)

    aInit = [forEach(cls.name, lambda x, cls=cls: instantiate(initContract(cls).formula, x)) for cls in model.classes]
    b.add('{}_all_{}'.format(INIT, sched.initial), INIT, mkImplies(mkAnd(*aInit, phaseIs(sched.initial)), inv), phase=sched.initial)

    for t in sched.transitions:
        if t.selfLoop:
            continue
        hyp = [Old(mkAnd(inv, phaseIs(t.src), schedGuard(sched, t))), phaseIs(t.dst), allExecutedReset(model)]
        if t.dst == sched.final:
            kind = PHASE_FINAL
            hyp += [forEach(cls.name, lambda x, cls=cls: instantiate(tickContract(cls).formula, x)) for cls in model.classes]
        else:
            kind = PHASE_NONFINAL
            hyp.append(allUnchanged(model, ('var', 'input', 'event', 'timer')))
        b.add('{}_all_{}-{}'.format(kind, t.src, t.dst), kind, mkImplies(mkAnd(*hyp), inv), edge=(t.src, t.dst))

    hyp = [Old(mkAnd(inv, phaseIs(sched.final))), phaseIs(sched.initial), allUnchanged(model, ('var', 'event', 'timer', 'executed'))]
    b.add('{}_all_{}-{}'.format(RESET, sched.final, sched.initial), RESET, mkImplies(mkAnd(*hyp), inv),
        edge=(sched.final, sched.initial))

    pProp = propertyPhase or sched.final
    b.add('{}_all_{}'.format(PROPERTY, pProp), PROPERTY, mkImplies(mkAnd(inv, phaseIs(pProp)), prop), phase=pProp)
    return b.aTask

# Local contracts, checked against a direct encoding of the exec body

_OBJ = '?self!o'

class _Ssa(object):
    """Statement-by-statement encoding of one exec body for the instance `$c`.

    Every write defines a fresh version of the whole field function.
    """

    def __init__(self, writer, cls):
        self.w = writer
        self.model = writer.model
        self.cls = cls
        self.c = ObjConst('c', cls.name)
        self.aLine = []
        self._n = itertools.count()

    def sortOf(self, key):
        return self.w.sortOf(self.model.cls(key[0]).field(key[1]).ty)

    def term(self, e, cur):
        return self.w.term(instantiate(e, self.c), syms=cur)

    def read(self, cur, key):
        return cur.get(key, SmtWriter.fieldSym(key[0], key[1], 'pre'))

    def define(self, key, var, body):
        sym = 'ssa!{}.{}.{}'.format(next(self._n), key[0], key[1])
        self.aLine.append('(define-fun {} (({} {})) {} {})'.format(sym, var, key[0], self.sortOf(key), body))
        return sym

    def point(self, cur, key, val):
        """Version of `key` that differs from the current one only at `$c`."""
        return self.define(key, _OBJ, '(ite (= {} $c) {} ({} {}))'.format(_OBJ, val, self.read(cur, key), _OBJ))

    def stmts(self, aStmt, cur):
        cur = dict(cur)
        for s in aStmt:
            if isinstance(s, Assign):
                key = (self.cls.name, s.name)
                cur[key] = self.point(cur, key, self.term(s.rhs, cur))
            elif isinstance(s, HavocStmt):
                key = (self.cls.name, s.name)
                h = 'ssa!h{}'.format(next(self._n))
                self.aLine.append('(declare-const {} {})'.format(h, self.sortOf(key)))
                cur[key] = self.point(cur, key, h)
            elif isinstance(s, QuantAssign):
                key = (s.cls, s.name)
                x = '?{}'.format(s.var)
                m = self.w.member(x, instantiate(s.rng, self.c), 'post', cur)
                body = '(ite {} {} ({} {}))'.format(m, self.term(s.rhs, cur), self.read(cur, key), x)
                cur[key] = self.define(key, x, body)
            elif isinstance(s, RefAssign):
                key = (s.cls, s.name)
                body = '(ite (= {} {}) {} ({} {}))'.format(_OBJ, self.term(s.obj, cur), self.term(s.rhs, cur), self.read(cur, key), _OBJ)
                cur[key] = self.define(key, _OBJ, body)
            elif isinstance(s, If):
                cond = self.term(s.cond, cur)
                curT = self.stmts(s.then, cur)
                curE = self.stmts(s.orelse, cur)
                for key in sorted(set(curT) | set(curE)):
                    a, b = self.read(curT, key), self.read(curE, key)
                    if a != b:
                        cur[key] = self.define(key, _OBJ, '(ite {} ({} {}) ({} {}))'.format(cond, a, _OBJ, b, _OBJ))
                    else:
                        cur[key] = a
            elif isinstance(s, (Assume, Assert)):
                raise ContractError("Effects with assume/assert have no generated contract")
        return cur

    def transition(self, t):
        cur = self.stmts(t.effect, {})
        cur[(self.cls.name, 'location')] = self.point(cur, (self.cls.name, 'location'), '{}.{}'.format(self.cls.location.ty.name, t.end))
        for ev in t.guardEvents(self.cls):
            cur[(self.cls.name, ev)] = self.point(cur, (self.cls.name, ev), 'false')
        return cur

    def execRelation(self, phase):
        aKey = [(self.cls.name, f.name) for f in self.cls.fieldsOfKind('var', 'input', 'event', 'timer')]
        aKey += sorted(phaseFunctionFields(self.cls, phase) - set(aKey))
        aBranch = []
        for t in self.cls.phaseTransitions(phase):
            en = self.term(mkAnd(atLocation(self.cls, t.start), t.guard), {})
            aBranch.append((en, self.transition(t)))
        for key in aKey:
            sel = '({} {})'.format(SmtWriter.fieldSym(key[0], key[1], 'pre'), _OBJ)
            for en, cur in reversed(aBranch):
                sel = '(ite {} ({} {}) {})'.format(en, self.read(cur, key), _OBJ, sel)
            self.aLine.append('(assert (forall (({} {})) (= ({} {}) {})))'.format(
                _OBJ, key[0], SmtWriter.fieldSym(key[0], key[1]), _OBJ, sel))
        self.aLine.append('(assert ({} $c))'.format(SmtWriter.fieldSym(self.cls.name, 'executed')))
        self.aLine.append('(assert (All.{} $c))'.format(self.cls.name))
        return self.aLine

    def initRelation(self):
        for fd in self.cls.fields:
            sym = SmtWriter.fieldSym(self.cls.name, fd.name)
            if fd.kind == 'var' and fd.init is not None:
                self.aLine.append('(assert (= ({} $c) {}))'.format(sym, self.term(fd.init, {})))
            elif fd.kind == 'event':
                self.aLine.append('(assert (not ({} $c)))'.format(sym))
            elif fd.kind == 'timer':
                self.aLine.append('(assert (= ({} $c) Timer.inactive))'.format(sym))
        self.aLine.append('(assert (not ({} $c)))'.format(SmtWriter.fieldSym(self.cls.name, 'executed')))
        return self.aLine

    def tickRelation(self):
        for fd in self.cls.fieldsOfKind('var', 'input', 'event', 'timer'):
            sym = SmtWriter.fieldSym(self.cls.name, fd.name)
            pre = '({} $c)'.format(SmtWriter.fieldSym(self.cls.name, fd.name, 'pre'))
            if fd.ty == TTimer:
                val = ('(ite ((_ is Timer.active) {0}) (ite (> (Timer.remaining {0}) 1) '
                    '(Timer.active (- (Timer.remaining {0}) 1)) Timer.inactive) Timer.inactive)').format(pre)
            else:
                val = pre
            self.aLine.append('(assert (= ({} $c) {}))'.format(sym, val))
        return self.aLine

def buildLocalContractTask(model, cls, phase, contract=None, cardBound=CARD_BOUND):
    """Direct encoding of exec(phase) of `cls` implies its contract.

    `phase` may also be 'init' or 'tick'. A `contract` given here replaces
    the generated one.
    """
    writer = SmtWriter(model, cardBound)
    ssa = _Ssa(writer, cls)
    c = ObjConst('c', cls.name)
    if phase == 'init':
        aExtra = ssa.initRelation()
        contract = contract or initContract(cls)
    elif phase == 'tick':
        aExtra = ssa.tickRelation()
        contract = contract or tickContract(cls)
    else:
        aExtra = ssa.execRelation(phase)
        contract = contract or execContract(cls, phase, model)
    formula = instantiate(contract.formula, c)
    return VerificationTask('{}_{}_{}'.format(LOCAL, cls.name, phase), LOCAL, formula,
        writer.query(formula, aExtra), cls=cls.name, phase=phase)

def buildLocalContractTasks(model, cardBound=CARD_BOUND):
    aTask = []
    for cls in model.classes:
        aTask.append(buildLocalContractTask(model, cls, 'init', cardBound=cardBound))
        for p in model.scheduler.phases:
            aTask.append(buildLocalContractTask(model, cls, p, cardBound=cardBound))
        aTask.append(buildLocalContractTask(model, cls, 'tick', cardBound=cardBound))
    return aTask
