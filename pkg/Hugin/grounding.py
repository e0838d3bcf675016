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

"""Quantifier grounding for set fields with at most one member.

A constraint `forall c in All<C> : |c.s| == 1` (or `<= 1`) lets every
quantifier over `c.s` collapse onto a single object field. The set field
stays in the model as ghost state; the grounded field is derived from it.
"""

from collections import namedtuple
from dataclasses import replace

from .diagnostics import GroundingError
from .expr import (TObj, IntLit, NullLit, SelfRef, ObjConst, Bound, AllSet, Field, Old, Binary, Ite, Card, Quant,
        QuantAssign, RefAssign, If, Assign, HavocStmt,
        walk, mapChildren, freshName, substBound, conjuncts, instantiate, mkAnd, mkOr, mkNot, mkImplies, mkEq)
from .model import FieldDecl, Configuration
from .contractgen import allContracts
from .smtlib import SmtWriter, CARD_BOUND
from .vcgen import VerificationTask, LEMMA, inAll
from .logging import logger

GroundEntry = namedtuple('GroundEntry', ['cls', 'source', 'name', 'nullable', 'elem'])

class GroundingPlan(object):
    def __init__(self, aEntry=()):
        self.entries = {(e.cls, e.source): e for e in aEntry}

    def __len__(self):
        return len(self.entries)

    def __bool__(self):
        return bool(self.entries)

    def __iter__(self):
        return iter(self.entries.values())

    def get(self, cls, source):
        return self.entries.get((cls, source))

    def __repr__(self):
        return 'GroundingPlan({})'.format(', '.join('{}.{} -> {}{}'.format(
            e.cls, e.source, e.name, '?' if e.nullable else '') for e in self))

def _unitBound(e, var):
    """('eq'|'le', set field name, k) for `|var.s| op k`, else None."""
    if not isinstance(e, Binary) or not isinstance(e.a, Card) or not isinstance(e.b, IntLit):
        return None
    s = e.a.e
    if not isinstance(s, Field) or not isinstance(s.obj, Bound) or s.obj.name != var:
        return None
    if e.op == '==':
        return ('eq', s.name, e.b.value)
    if e.op == '<=':
        return ('le', s.name, e.b.value)
    if e.op == '<':
        return ('le', s.name, e.b.value - 1)
    return None

def _groundName(cls, source):
    name = source[:-1] if source.endswith('s') and len(source) > 1 else source + 'Obj'
    while cls.field(name) is not None:
        name += 'Obj'
    return name

def plan(model, fields=None):
    """Grounding plan from the unit-cardinality constraints of the model.

    `fields` restricts the plan to the given (class, set field) pairs; asking
    for a set whose bound is not 0 or 1 raises GroundingError.
    """
    dictBound = {}
    for cons in model.constraints:
        for q in conjuncts(cons.expr):
            if not isinstance(q, Quant) or q.kind != 'forall' or not isinstance(q.rng, AllSet):
                continue
            for atom in conjuncts(q.body):
                ub = _unitBound(atom, q.var)
                if ub is None:
                    continue
                kind, source, k = ub
                dictBound.setdefault((q.cls, source), []).append((kind, k))
    aEntry = []
    for (clsName, source), aBound in sorted(dictBound.items()):
        if fields is not None and (clsName, source) not in fields:
            continue
        if ('eq', 1) in aBound:
            nullable = False
        elif any(kind == 'le' and k <= 1 for kind, k in aBound):
            nullable = True
        else:
            if fields is not None:
                raise GroundingError("{}.{} has bound {}; only sets with at most one member can be grounded".format(
                    clsName, source, max(k for _, k in aBound)))
            continue
        cls = model.cls(clsName)
        aEntry.append(GroundEntry(clsName, source, _groundName(cls, source), nullable, cls.field(source).ty.name))
    if fields is not None:
        for key in fields:
            if key not in dictBound:
                raise GroundingError("{}.{} has no cardinality constraint to ground with".format(*key))
    return GroundingPlan(aEntry)

# Formulas

def _grounded(e, p):
    """The grounded object field standing for set expression `e`, or None."""
    if isinstance(e, Old):
        return _grounded(e.e, p)
    if isinstance(e, Field):
        ent = p.get(e.cls, e.name)
        if ent is not None:
            return ent, Field(groundFormula(e.obj, p), e.cls, ent.name)
    return None

def _present(ent, g):
    return Binary('!=', g, NullLit(ent.elem)) if ent.nullable else None

def _member(x, rng, p):
    """x in rng, with grounded sets and unions split out."""
    if isinstance(rng, Binary) and rng.op == 'union':
        return mkOr(_member(x, rng.a, p), _member(x, rng.b, p))
    gr = _grounded(rng, p)
    if gr is None:
        return Binary('in', x, groundFormula(rng, p))
    ent, g = gr
    present = _present(ent, g)
    return mkEq(x, g) if present is None else mkAnd(present, mkEq(x, g))

def _hasGrounded(rng, p):
    if isinstance(rng, Binary) and rng.op == 'union':
        return _hasGrounded(rng.a, p) or _hasGrounded(rng.b, p)
    return _grounded(rng, p) is not None

def _quant(kind, var, cls, rng, body, p):
    if isinstance(rng, Binary) and rng.op == 'union' and _hasGrounded(rng, p):
        a = _quant(kind, var, cls, rng.a, body, p)
        b = _quant(kind, var, cls, rng.b, body, p)
        return mkAnd(a, b) if kind == 'forall' else mkOr(a, b)
    gr = _grounded(rng, p)
    if gr is None:
        return Quant(kind, var, cls, groundFormula(rng, p), groundFormula(body, p))
    ent, g = gr
    b = groundFormula(substBound(body, var, g), p)
    present = _present(ent, g)
    if present is None:
        return b
    return mkImplies(present, b) if kind == 'forall' else mkAnd(present, b)

def groundFormula(e, p):
    """Rewrite quantifiers and set atoms over grounded sets into object-field form."""
    if not p:
        return e
    if isinstance(e, Quant):
        return _quant(e.kind, e.var, e.cls, e.rng, e.body, p)
    if isinstance(e, Binary) and e.op == 'in':
        return _member(groundFormula(e.a, p), e.b, p)
    if isinstance(e, Card):
        gr = _grounded(e.e, p)
        if gr is not None:
            ent, g = gr
            present = _present(ent, g)
            return IntLit(1) if present is None else Ite(present, IntLit(1), IntLit(0))
    if isinstance(e, Binary) and e.op == 'subset':
        gr = _grounded(e.a, p)
        if gr is not None:
            ent, g = gr
            inner = _member(g, e.b, p)
            present = _present(ent, g)
            return inner if present is None else mkImplies(present, inner)
        gr = _grounded(e.b, p)
        if gr is not None:
            v = freshName('z')
            return _quant('forall', v, gr[0].elem, e.a, mkEq(Bound(v, gr[0].elem), gr[1]), p)
    if isinstance(e, Binary) and e.op == 'disjoint':
        for a, b in ((e.a, e.b), (e.b, e.a)):
            gr = _grounded(a, p)
            if gr is not None:
                ent, g = gr
                inner = mkNot(_member(g, b, p))
                present = _present(ent, g)
                return inner if present is None else mkImplies(present, inner)
    return mapChildren(e, lambda c: groundFormula(c, p))

# Statements and models

def _groundStmt(s, p):
    if isinstance(s, QuantAssign):
        gr = _grounded(s.rng, p)
        rhs = groundFormula(s.rhs, p)
        if gr is None:
            return [replace(s, rng=groundFormula(s.rng, p), rhs=rhs)]
        ent, g = gr
        assign = RefAssign(g, s.cls, s.name, groundFormula(substBound(s.rhs, s.var, g), p))
        present = _present(ent, g)
        if present is None:
            return [assign]
        return [If(present, (assign,), ())]
    if isinstance(s, If):
        return [If(groundFormula(s.cond, p), groundStmts(s.then, p), groundStmts(s.orelse, p))]
    if isinstance(s, RefAssign):
        return [replace(s, obj=groundFormula(s.obj, p), rhs=groundFormula(s.rhs, p))]
    if isinstance(s, Assign):
        return [replace(s, rhs=groundFormula(s.rhs, p))]
    if isinstance(s, HavocStmt):
        return [s]
    return [mapChildren(s, lambda c: groundFormula(c, p))]

def groundStmts(aStmt, p):
    aRslt = []
    for s in aStmt:
        aRslt += _groundStmt(s, p)
    return tuple(aRslt)

def groundStatements(model, p):
    """The grounded model: ground fields added next to their ghost sets, effects and guards rewritten."""
    if not p:
        return model
    aClass = []
    for cls in model.classes:
        aField = []
        for fd in cls.fields:
            aField.append(fd)
            ent = p.get(cls.name, fd.name)
            if ent is not None:
                aField.append(FieldDecl(ent.name, TObj(ent.elem), 'ground', source=fd.name, nullable=ent.nullable))
        aTrans = [replace(t, guard=groundFormula(t.guard, p), effect=groundStmts(t.effect, p)) for t in cls.transitions]
        aClass.append(replace(cls, fields=tuple(aField), transitions=tuple(aTrans)))
    sched = model.scheduler
    aSched = tuple(replace(t, guard=groundFormula(t.guard, p)) for t in sched.transitions)
    logger.debug("Grounded {}".format(p))
    return replace(model, classes=tuple(aClass), scheduler=replace(sched, transitions=aSched))

def groundConfiguration(cfg, grounded):
    """The same configuration seen by the grounded model."""
    cfgNew = Configuration(grounded)
    cfgNew.universes = {k: list(v) for k, v in cfg.universes.items()}
    cfgNew.owner = dict(cfg.owner)
    cfgNew.sets = dict(cfg.sets)
    cfgNew.params = dict(cfg.params)
    cfgNew.gamma = list(cfg.gamma)
    cfgNew.deriveGrounded()
    return cfgNew

# Equivalence lemmas

def linking(p):
    """Ties every grounded field to its ghost set: empty means null, one member means that member."""
    aConj = []
    for ent in p:
        v = freshName('o')
        o = Bound(v, ent.cls)
        s = Field(o, ent.cls, ent.source)
        g = Field(o, ent.cls, ent.name)
        z = freshName('z')
        single = mkAnd(Binary('in', g, s), Quant('forall', z, ent.elem, s, mkEq(Bound(z, ent.elem), g)))
        if ent.nullable:
            body = mkAnd(mkImplies(mkEq(Card(s), IntLit(0)), mkEq(g, NullLit(ent.elem))),
                mkImplies(mkEq(Card(s), IntLit(1)), single))
        else:
            body = single
        aConj.append(Quant('forall', v, ent.cls, AllSet(ent.cls), body))
    return mkAnd(*aConj)

def defaultSpecs(model, aInv=(), aProp=()):
    """(label, formula) for every contract, invariant conjunct, property conjunct and scheduler guard."""
    aRslt = []
    for con in allContracts(model):
        aRslt.append(('{}_{}_{}'.format(con.kind, con.cls, con.phase or 'all'), con.formula))
    aRslt += [('inv_{}'.format(c.label), c.expr) for c in aInv]
    aRslt += [('prop_{}'.format(c.label), c.expr) for c in aProp]
    for t in model.scheduler.transitions:
        aRslt.append(('guard_{}-{}_{}'.format(t.src, t.dst, t.index), t.guard))
    return aRslt

def equivalenceLemmas(model, p, specs, cardBound=CARD_BOUND):
    """One task per spec: Γ and the linking assumptions entail grounded(spec) <==> spec."""
    grounded = groundStatements(model, p)
    writer = SmtWriter(grounded, cardBound)
    link = linking(p)
    aTask = []
    for label, e in specs:
        hyp = link
        aSelf = [x for x in walk(e) if isinstance(x, SelfRef)]
        if aSelf:
            c = ObjConst('c', aSelf[0].cls)
            e = instantiate(e, c)
            hyp = mkAnd(inAll(c), link)
        lemma = mkImplies(hyp, Binary('<==>', groundFormula(e, p), e))
        aTask.append(VerificationTask('{}_{}'.format(LEMMA, label), LEMMA, lemma, writer.query(lemma)))
    return aTask
