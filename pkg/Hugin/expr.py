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

"""Expression and statement trees.

All nodes are frozen dataclasses; the optional `span` never takes part in
equality, so two trees parsed from differently formatted sources compare
equal.
"""

import itertools
from collections import namedtuple
from dataclasses import dataclass, field, fields, replace

def _span():
    return field(default=None, compare=False, repr=False)

class Node(object):
    def children(self):
        for f in fields(self):
            if f.name == 'span': continue
            v = getattr(self, f.name)
            if isinstance(v, Node):
                yield v
            elif isinstance(v, tuple):
                for x in v:
                    if isinstance(x, Node):
                        yield x

class Expr(Node):
    pass

class Stmt(Node):
    pass

@dataclass(frozen=True)
class Ty:
    kind: str # int bool enum timer obj set
    name: str = None

    def __str__(self):
        if self.kind == 'int': return 'Int'
        if self.kind == 'bool': return 'Bool'
        if self.kind == 'timer': return 'Timer'
        if self.kind == 'set': return 'Set<{}>'.format(self.name)
        return self.name

TInt = Ty('int')
TBool = Ty('bool')
TTimer = Ty('timer')

def TEnum(name): return Ty('enum', name)
def TObj(name): return Ty('obj', name)
def TSet(name): return Ty('set', name)

PHASE_ENUM = 'Phase'

# Leaves

@dataclass(frozen=True)
class IntLit(Expr):
    value: int
    span: object = _span()

@dataclass(frozen=True)
class BoolLit(Expr):
    value: bool
    span: object = _span()

@dataclass(frozen=True)
class EnumLit(Expr):
    enum: str
    value: str
    span: object = _span()

@dataclass(frozen=True)
class NullLit(Expr):
    cls: str
    span: object = _span()

@dataclass(frozen=True)
class TimerOff(Expr):
    span: object = _span()

@dataclass(frozen=True)
class SelfRef(Expr):
    cls: str
    span: object = _span()

@dataclass(frozen=True)
class ObjConst(Expr):
    """A named instance inside a verification task (the `c` and `d` of the checks)."""
    name: str
    cls: str
    span: object = _span()

@dataclass(frozen=True)
class Bound(Expr):
    name: str
    cls: str
    span: object = _span()

@dataclass(frozen=True)
class AllSet(Expr):
    cls: str
    span: object = _span()

@dataclass(frozen=True)
class PhaseRef(Expr):
    span: object = _span()

@dataclass(frozen=True)
class Havoc(Expr):
    """An arbitrary value drawn for field `name`; `tag` tells draws apart."""
    name: str = ''
    tag: str = ''
    span: object = _span()

# Compound

@dataclass(frozen=True)
class TimerOn(Expr):
    e: Expr
    span: object = _span()

@dataclass(frozen=True)
class TimerActive(Expr):
    e: Expr
    span: object = _span()

@dataclass(frozen=True)
class TimerLeft(Expr):
    e: Expr
    span: object = _span()

@dataclass(frozen=True)
class Field(Expr):
    obj: Expr
    cls: str
    name: str
    span: object = _span()

@dataclass(frozen=True)
class Old(Expr):
    e: Expr
    span: object = _span()

@dataclass(frozen=True)
class Unary(Expr):
    op: str # ! -
    e: Expr
    span: object = _span()

@dataclass(frozen=True)
class Binary(Expr):
    op: str
    a: Expr
    b: Expr
    span: object = _span()

@dataclass(frozen=True)
class Ite(Expr):
    c: Expr
    a: Expr
    b: Expr
    span: object = _span()

@dataclass(frozen=True)
class Card(Expr):
    e: Expr
    span: object = _span()

@dataclass(frozen=True)
class Quant(Expr):
    kind: str # forall exists
    var: str
    cls: str
    rng: Expr
    body: Expr
    span: object = _span()

@dataclass(frozen=True)
class Lambda(Expr):
    var: str
    cls: str
    body: Expr
    span: object = _span()

# Statements

@dataclass(frozen=True)
class Assign(Stmt):
    name: str
    rhs: Expr
    span: object = _span()

@dataclass(frozen=True)
class HavocStmt(Stmt):
    name: str
    span: object = _span()

@dataclass(frozen=True)
class If(Stmt):
    cond: Expr
    then: tuple
    orelse: tuple = ()
    span: object = _span()

@dataclass(frozen=True)
class QuantAssign(Stmt):
    var: str
    cls: str
    rng: Expr
    name: str
    rhs: Expr
    span: object = _span()

@dataclass(frozen=True)
class RefAssign(Stmt):
    """`obj.f := e` through a grounded object field."""
    obj: Expr
    cls: str
    name: str
    rhs: Expr
    span: object = _span()

@dataclass(frozen=True)
class Assume(Stmt):
    e: Expr
    span: object = _span()

@dataclass(frozen=True)
class Assert(Stmt):
    e: Expr
    span: object = _span()

BOOL_OPS = ('&&', '||', '==>', '<==>')
ARITH_OPS = ('+', '-', '*')
CMP_OPS = ('==', '!=', '<', '<=', '>', '>=')
SET_OPS = ('in', 'subset', 'disjoint', 'union')

TRUE = BoolLit(True)
FALSE = BoolLit(False)

# Generic traversal

def walk(e):
    yield e
    for c in e.children():
        yield from walk(c)

def mapChildren(e, fn):
    """Rebuild `e` with `fn` applied to every direct child node."""
    aChanges = {}
    for f in fields(e):
        if f.name == 'span': continue
        v = getattr(e, f.name)
        if isinstance(v, Node):
            aChanges[f.name] = fn(v)
        elif isinstance(v, tuple) and any(isinstance(x, Node) for x in v):
            aChanges[f.name] = tuple(fn(x) if isinstance(x, Node) else x for x in v)
    if not aChanges:
        return e
    return replace(e, **aChanges)

_fresh = itertools.count()

def freshName(base='v'):
    return '{}__{}'.format(base.split('__')[0], next(_fresh))

def boundNames(e):
    return {x.name for x in walk(e) if isinstance(x, Bound)}

def substBound(e, name, repl):
    """Replace free occurrences of bound variable `name`, renaming binders that would capture."""
    if isinstance(e, Bound):
        return repl if e.name == name else e
    if isinstance(e, (Quant, Lambda)):
        if e.var == name:
            if isinstance(e, Quant):
                return replace(e, rng=substBound(e.rng, name, repl))
            return e
        if e.var in boundNames(repl):
            vNew = freshName(e.var)
            body = substBound(e.body, e.var, Bound(vNew, e.cls))
            e = replace(e, var=vNew, body=body)
        if isinstance(e, Quant):
            return replace(e, rng=substBound(e.rng, name, repl), body=substBound(e.body, name, repl))
        return replace(e, body=substBound(e.body, name, repl))
    return mapChildren(e, lambda c: substBound(c, name, repl))

def instantiate(e, obj):
    """Replace `self` by `obj`."""
    if isinstance(e, SelfRef):
        return obj
    return mapChildren(e, lambda c: instantiate(c, obj))

def apply(lam, obj):
    return substBound(lam.body, lam.var, obj)

def stripOld(e):
    if isinstance(e, Old):
        return stripOld(e.e)
    return mapChildren(e, stripOld)

def hasOld(e):
    return any(isinstance(x, Old) for x in walk(e))

# Smart constructors

def mkAnd(*aExpr):
    aRslt = []
    for e in aExpr:
        if e == TRUE: continue
        if e == FALSE: return FALSE
        aRslt.append(e)
    if not aRslt:
        return TRUE
    rslt = aRslt[0]
    for e in aRslt[1:]:
        rslt = Binary('&&', rslt, e)
    return rslt

def mkOr(*aExpr):
    aRslt = []
    for e in aExpr:
        if e == FALSE: continue
        if e == TRUE: return TRUE
        aRslt.append(e)
    if not aRslt:
        return FALSE
    rslt = aRslt[0]
    for e in aRslt[1:]:
        rslt = Binary('||', rslt, e)
    return rslt

def mkNot(e):
    if e == TRUE: return FALSE
    if e == FALSE: return TRUE
    if isinstance(e, Unary) and e.op == '!':
        return e.e
    return Unary('!', e)

def mkImplies(a, b):
    if a == TRUE: return b
    if b == TRUE or a == FALSE: return TRUE
    return Binary('==>', a, b)

def mkEq(a, b):
    return Binary('==', a, b)

def conjuncts(e):
    if isinstance(e, Binary) and e.op == '&&':
        return conjuncts(e.a) + conjuncts(e.b)
    if e == TRUE:
        return []
    return [e]

def disjuncts(e):
    if isinstance(e, Binary) and e.op == '||':
        return disjuncts(e.a) + disjuncts(e.b)
    return [e]

# Free symbols

Sym = namedtuple('Sym', ['kind', 'cls', 'name', 'vintage'])

def freeSymbols(e, model=None, vintage='post'):
    """Every state or configuration symbol in `e`, tagged with its vintage.

    Kinds: field, param, set, ground, all, phase, executed. Without a model,
    every non-executed field reference is reported as kind `field`.
    """
    setRslt = set()
    if isinstance(e, Old):
        return freeSymbols(e.e, model, 'pre')
    if isinstance(e, Field):
        if e.name == 'executed':
            setRslt.add(Sym('executed', e.cls, 'executed', vintage))
        else:
            kind = 'field'
            if model is not None:
                fd = model.cls(e.cls).field(e.name)
                if fd is not None and fd.kind in ('param', 'set', 'ground'):
                    kind = fd.kind
            setRslt.add(Sym(kind, e.cls, e.name, vintage))
    elif isinstance(e, AllSet):
        setRslt.add(Sym('all', e.cls, 'All', vintage))
    elif isinstance(e, PhaseRef):
        setRslt.add(Sym('phase', None, 'phase', vintage))
    for c in e.children():
        setRslt |= freeSymbols(c, model, vintage)
    return setRslt

def fieldRefs(e):
    """(class, field) pairs read in `e`, ignoring vintage."""
    return {(s.cls, s.name) for s in freeSymbols(e) if s.kind in ('field', 'executed')}
