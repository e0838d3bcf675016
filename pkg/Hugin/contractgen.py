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

"""Local contracts by forward symbolic execution of transition effects.

A SymMap sends every symbol an effect writes to its post-value as a
pre-state expression. Own scalar fields map to expressions, fields written
through quantified or reference assignment map to Lambda updates, and havoc
maps to the Havoc marker, which contributes no constraint.
"""

from dataclasses import dataclass

from .diagnostics import ContractError
from .expr import (TimerOff, TimerOn, TimerActive, TimerLeft, IntLit, SelfRef, Bound, AllSet, EnumLit, Havoc,
        Field, Old, Binary, Ite, Quant, Lambda, Assign, HavocStmt, If, QuantAssign, RefAssign, Assume, Assert,
        TRUE, walk, mapChildren, freshName, substBound, apply, mkAnd, mkOr, mkNot, mkImplies, mkEq)
from .model import stmtWrites, selfWrites, functionWrites, transitionWrites, phaseFunctionFields

IMMUTABLE = ('param', 'set', 'ground')

class SymMap(object):
    def __init__(self, cls, scalars=None, functions=None):
        self.cls = cls
        self.scalars = dict(scalars or {})
        self.functions = dict(functions or {})

    def copy(self):
        return SymMap(self.cls, self.scalars, self.functions)

    @classmethod
    def initial(cls, klass, aStmt):
        """M0: every written symbol mapped to its own pre-state value."""
        m = cls(klass)
        for name in sorted(selfWrites(klass, aStmt)):
            m.scalars[name] = Old(Field(SelfRef(klass.name), klass.name, name))
        for clsName, name in sorted(functionWrites(klass, aStmt)):
            v = freshName('y')
            m.functions[(clsName, name)] = Lambda(v, clsName, Old(Field(Bound(v, clsName), clsName, name)))
        return m

    def __eq__(self, other):
        return isinstance(other, SymMap) and self.scalars == other.scalars and self.functions == other.functions

    def __repr__(self):
        from .pretty import printExpr
        aItem = ['{} -> {}'.format(k, printExpr(v)) for k, v in self.scalars.items()]
        aItem += ['{}.{} -> {}'.format(c, f, printExpr(v)) for (c, f), v in self.functions.items()]
        return 'SymMap({})'.format('; '.join(aItem))

def _isMutable(model, clsName, name):
    fd = model.cls(clsName).field(name) if model is not None else None
    return fd is None or fd.kind not in IMMUTABLE

def subst(e, m, model=None):
    """Rewrite `e` over the pre-state, reading written symbols from `m`."""
    if isinstance(e, Field):
        obj = subst(e.obj, m, model)
        key = (e.cls, e.name)
        if key in m.functions:
            return apply(m.functions[key], obj)
        if e.cls == m.cls.name and e.name in m.scalars:
            if isinstance(obj, SelfRef):
                return m.scalars[e.name]
            return Ite(mkEq(obj, SelfRef(m.cls.name)), m.scalars[e.name], Old(Field(obj, e.cls, e.name)))
        if _isMutable(model, e.cls, e.name):
            return Old(Field(obj, e.cls, e.name))
        return Field(obj, e.cls, e.name)
    if isinstance(e, Old):
        return e
    return mapChildren(e, lambda c: subst(c, m, model))

def _merge(c, a, b):
    return a if a == b else Ite(c, a, b)

def transform(aStmt, m, model=None):
    """Apply a statement list to a SymMap; returns a new map."""
    m = m.copy()
    for s in aStmt:
        if isinstance(s, Assign):
            m.scalars[s.name] = subst(s.rhs, m, model)
        elif isinstance(s, HavocStmt):
            m.scalars[s.name] = Havoc(s.name, freshName('h'))
        elif isinstance(s, If):
            c = subst(s.cond, m, model)
            m1 = transform(s.then, m, model)
            m2 = transform(s.orelse, m, model)
            for k in m.scalars:
                m.scalars[k] = _merge(c, m1.scalars[k], m2.scalars[k])
            for k, lam in m.functions.items():
                l1, l2 = m1.functions[k], m2.functions[k]
                if l1 == l2:
                    m.functions[k] = l1
                else:
                    v = freshName('y')
                    y = Bound(v, k[0])
                    m.functions[k] = Lambda(v, k[0], Ite(c, apply(l1, y), apply(l2, y)))
        elif isinstance(s, QuantAssign):
            rng = subst(s.rng, m, model)
            rhs = subst(s.rhs, m, model)
            key = (s.cls, s.name)
            v = freshName('y')
            y = Bound(v, s.cls)
            m.functions[key] = Lambda(v, s.cls, Ite(Binary('in', y, rng), substBound(rhs, s.var, y), apply(m.functions[key], y)))
        elif isinstance(s, RefAssign):
            obj = subst(s.obj, m, model)
            rhs = subst(s.rhs, m, model)
            key = (s.cls, s.name)
            v = freshName('y')
            y = Bound(v, s.cls)
            m.functions[key] = Lambda(v, s.cls, Ite(mkEq(y, obj), rhs, apply(m.functions[key], y)))
        elif isinstance(s, (Assume, Assert)):
            raise ContractError("Effects with assume/assert have no generated contract")
    return m

def transformEffect(aStmt, cls, model=None):
    return transform(aStmt, SymMap.initial(cls, aStmt), model)

def _hasHavoc(e):
    return any(isinstance(x, Havoc) for x in walk(e))

def havocRefs(m, skip=()):
    """Havoc draws still held by their own field at the end, mapped to that field's post-state."""
    return {v: Field(SelfRef(m.cls.name), m.cls.name, name) for name, v in m.scalars.items()
        if isinstance(v, Havoc) and v.name == name and name not in skip}

def resolveHavoc(e, dictRef):
    """Replace havoc draws in `e` by the post-state fields that kept them."""
    if isinstance(e, Havoc):
        return dictRef.get(e, e)
    return mapChildren(e, lambda c: resolveHavoc(c, dictRef))

def _equation(lhs, v):
    """lhs == v, with unresolved havoc left unconstrained."""
    if not _hasHavoc(v):
        return mkEq(lhs, v)
    if isinstance(v, Ite) and not _hasHavoc(v.c):
        return mkAnd(mkImplies(v.c, _equation(lhs, v.a)), mkImplies(mkNot(v.c), _equation(lhs, v.b)))
    return TRUE

def effectFormula(m, skip=(), guardOthers=()):
    """Post = M(pre) for every mapped symbol not in `skip`.

    Function fields listed in `guardOthers` are constrained only for objects
    other than self. A havoc draw that its field still holds reads as that
    field's post-state value.
    """
    dictRef = havocRefs(m, skip)
    aConj = []
    for name, v in m.scalars.items():
        if name in skip or (isinstance(v, Havoc) and v in dictRef):
            continue
        aConj.append(_equation(Field(SelfRef(m.cls.name), m.cls.name, name), resolveHavoc(v, dictRef)))
    for (clsName, name), lam in m.functions.items():
        y = Bound(lam.var, clsName)
        body = _equation(Field(y, clsName, name), resolveHavoc(lam.body, dictRef))
        if (clsName, name) in guardOthers:
            body = mkImplies(Binary('!=', y, SelfRef(m.cls.name)), body)
        if body != TRUE:
            aConj.append(Quant('forall', lam.var, clsName, AllSet(clsName), body))
    return mkAnd(*aConj)

# Building blocks

def selfField(cls, name):
    return Field(SelfRef(cls.name), cls.name, name)

def unchangedOwn(cls, name):
    f = selfField(cls, name)
    return mkEq(f, Old(f))

def unchangedAll(clsName, name):
    v = freshName('y')
    f = Field(Bound(v, clsName), clsName, name)
    return Quant('forall', v, clsName, AllSet(clsName), mkEq(f, Old(f)))

def atLocation(cls, loc):
    fd = cls.location
    return mkEq(selfField(cls, 'location'), EnumLit(fd.ty.name, loc))

def ownScalars(cls):
    """Own mutable fields other than the executed flag."""
    return [fd.name for fd in cls.fieldsOfKind('var', 'input', 'event', 'timer')]

def earlierGuards(cls, t):
    return [u.guard for u in cls.transitions if u.phase == t.phase and u.start == t.start and u.index < t.index]

def extendedGuard(cls, t):
    return mkAnd(t.guard, *[mkNot(g) for g in earlierGuards(cls, t)])

def enabled(cls, t):
    """Single-state condition under which `t` fires."""
    return mkAnd(atLocation(cls, t.start), extendedGuard(cls, t))

@dataclass(frozen=True)
class Contract:
    kind: str # init exec tick
    cls: str
    phase: str
    formula: object
    disjuncts: tuple = () # (label, formula) for exec contracts

def transitionFormula(cls, t, model=None):
    m = transformEffect(t.effect, cls, model)
    aEvent = t.guardEvents(cls)
    setFnOwn = {k for k in m.functions if k[0] == cls.name and k[1] in aEvent}
    effect = effectFormula(m, skip=aEvent, guardOthers=setFnOwn)
    setWrite = transitionWrites(cls, t)
    aUnchanged = [unchangedOwn(cls, f) for f in ownScalars(cls) if (cls.name, f) not in setWrite]
    setFn = phaseFunctionFields(cls, t.phase) - stmtWrites(cls, t.effect)
    aUnchanged += [unchangedAll(c, f) for c, f in sorted(setFn)]
    aReset = [mkNot(selfField(cls, ev)) for ev in aEvent]
    return mkAnd(Old(enabled(cls, t)), effect, atLocation(cls, t.end), selfField(cls, 'executed'), *(aReset + aUnchanged))

def stutterFormula(cls, phase):
    aGuard = [Old(mkNot(enabled(cls, t))) for t in cls.phaseTransitions(phase)]
    aUnchanged = [unchangedOwn(cls, f) for f in ownScalars(cls)]
    aUnchanged += [unchangedAll(c, f) for c, f in sorted(phaseFunctionFields(cls, phase))]
    return mkAnd(*(aGuard + aUnchanged + [selfField(cls, 'executed')]))

def execContract(cls, phase, model=None):
    aDisj = [(t.name, transitionFormula(cls, t, model)) for t in cls.phaseTransitions(phase)]
    aDisj.append(('stutter', stutterFormula(cls, phase)))
    return Contract('exec', cls.name, phase, mkOr(*[f for _, f in aDisj]), tuple(aDisj))

def initContract(cls):
    aConj = []
    for fd in cls.fields:
        if fd.kind == 'var' and fd.init is not None:
            aConj.append(mkEq(selfField(cls, fd.name), fd.init))
        elif fd.kind == 'event':
            aConj.append(mkNot(selfField(cls, fd.name)))
        elif fd.kind == 'timer':
            aConj.append(mkEq(selfField(cls, fd.name), TimerOff()))
    aConj.append(mkNot(selfField(cls, 'executed')))
    return Contract('init', cls.name, None, mkAnd(*aConj))

def tickContract(cls):
    aConj = []
    for fd in cls.fieldsOfKind('timer'):
        t = selfField(cls, fd.name)
        active, left = Old(TimerActive(t)), Old(TimerLeft(t))
        aConj.append(mkImplies(mkAnd(active, Binary('>', left, IntLit(1))), mkEq(t, TimerOn(Binary('-', left, IntLit(1))))))
        aConj.append(mkImplies(mkAnd(active, mkEq(left, IntLit(1))), mkEq(t, TimerOff())))
        aConj.append(mkImplies(mkNot(active), mkEq(t, TimerOff())))
    aConj += [unchangedOwn(cls, f) for f in ownScalars(cls) if cls.field(f).kind != 'timer']
    return Contract('tick', cls.name, None, mkAnd(*aConj))

def allContracts(model):
    """Every local contract of the model, init and tick first per class."""
    aRslt = []
    for cls in model.classes:
        aRslt.append(initContract(cls))
        for p in model.scheduler.phases:
            aRslt.append(execContract(cls, p, model))
        aRslt.append(tickContract(cls))
    return aRslt
