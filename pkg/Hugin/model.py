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

from dataclasses import dataclass, field

from .expr import Ty, TBool, TTimer, PHASE_ENUM, Assign, HavocStmt, If, QuantAssign, RefAssign, Field, SelfRef, conjuncts

MUTABLE_KINDS = ('var', 'input', 'event', 'timer')
IMMUTABLE_KINDS = ('param', 'set', 'ground')

@dataclass(frozen=True)
class FieldDecl:
    name: str
    ty: Ty
    kind: str # var input event timer param set ground executed
    init: object = None
    source: str = None # ground: the set field it stands for
    nullable: bool = False
    span: object = field(default=None, compare=False, repr=False)

    @property
    def mutable(self):
        return self.kind in MUTABLE_KINDS or self.kind == 'executed'

EXECUTED = FieldDecl('executed', TBool, 'executed')

@dataclass(frozen=True)
class EnumDecl:
    name: str
    values: tuple
    span: object = field(default=None, compare=False, repr=False)

@dataclass(frozen=True)
class Transition:
    name: str
    start: str
    guard: object
    end: str
    effect: tuple
    phase: str
    index: int
    span: object = field(default=None, compare=False, repr=False)

    def guardEvents(self, cls):
        """The own-event conjuncts of the guard, in order."""
        aRslt = []
        for e in conjuncts(self.guard):
            if isinstance(e, Field) and isinstance(e.obj, SelfRef):
                fd = cls.field(e.name)
                if fd is not None and fd.kind == 'event':
                    aRslt.append(e.name)
        return aRslt

@dataclass(frozen=True)
class ClassDecl:
    name: str
    fields: tuple
    transitions: tuple
    declaresExecuted: bool = False
    span: object = field(default=None, compare=False, repr=False)

    def field(self, name):
        if name == 'executed':
            return EXECUTED
        for f in self.fields:
            if f.name == name:
                return f
        return None

    def fieldsOfKind(self, *kinds):
        return [f for f in self.fields if f.kind in kinds]

    @property
    def location(self):
        return self.field('location')

    @property
    def stateFields(self):
        """Mutable fields including the built-in executed flag."""
        return self.fieldsOfKind(*MUTABLE_KINDS) + [EXECUTED]

    def phaseTransitions(self, phase):
        return [t for t in self.transitions if t.phase == phase]

@dataclass(frozen=True)
class SchedTrans:
    src: str
    dst: str
    guard: object
    index: int
    span: object = field(default=None, compare=False, repr=False)

    @property
    def selfLoop(self):
        return self.src == self.dst

@dataclass(frozen=True)
class Scheduler:
    phases: tuple
    initial: str
    final: str
    transitions: tuple
    span: object = field(default=None, compare=False, repr=False)

    def outgoing(self, phase):
        return [t for t in self.transitions if t.src == phase]

    @property
    def selfLoopPhases(self):
        return [p for p in self.phases if any(t.selfLoop for t in self.outgoing(p))]

@dataclass(frozen=True)
class Constraint:
    label: str
    expr: object
    span: object = field(default=None, compare=False, repr=False)

@dataclass(frozen=True)
class Model:
    enums: tuple
    classes: tuple
    scheduler: Scheduler
    constraints: tuple
    source: str = field(default=None, compare=False, repr=False)

    def cls(self, name):
        for c in self.classes:
            if c.name == name:
                return c
        raise KeyError("Unknown class {}".format(name))

    def hasClass(self, name):
        return any(c.name == name for c in self.classes)

    def enum(self, name):
        if name == PHASE_ENUM:
            return EnumDecl(PHASE_ENUM, self.scheduler.phases)
        for e in self.enums:
            if e.name == name:
                return e
        raise KeyError("Unknown enum {}".format(name))

    @property
    def classNames(self):
        return [c.name for c in self.classes]

def stmtWrites(cls, aStmt):
    """(class, field) pairs written by a statement list."""
    setRslt = set()
    for s in aStmt:
        if isinstance(s, (Assign, HavocStmt)):
            setRslt.add((cls.name, s.name))
        elif isinstance(s, (QuantAssign, RefAssign)):
            setRslt.add((s.cls, s.name))
        elif isinstance(s, If):
            setRslt |= stmtWrites(cls, s.then)
            setRslt |= stmtWrites(cls, s.orelse)
    return setRslt

def selfWrites(cls, aStmt):
    """Own fields written through direct assignment or havoc."""
    setFn = functionWrites(cls, aStmt)
    return {f for c, f in stmtWrites(cls, aStmt) if c == cls.name and (c, f) not in setFn}

def functionWrites(cls, aStmt):
    """(class, field) pairs written through quantified or reference assignment."""
    setRslt = set()
    for s in aStmt:
        if isinstance(s, (QuantAssign, RefAssign)):
            setRslt.add((s.cls, s.name))
        elif isinstance(s, If):
            setRslt |= functionWrites(cls, s.then)
            setRslt |= functionWrites(cls, s.orelse)
    return setRslt

def transitionWrites(cls, t):
    """Everything a firing of `t` may change, location and executed included."""
    setRslt = stmtWrites(cls, t.effect)
    setRslt.add((cls.name, 'location'))
    setRslt.add((cls.name, 'executed'))
    for ev in t.guardEvents(cls):
        setRslt.add((cls.name, ev))
    return setRslt

def writeFootprint(cls, phase):
    setRslt = {(cls.name, 'executed')}
    for t in cls.phaseTransitions(phase):
        setRslt |= transitionWrites(cls, t)
    return setRslt

def phaseFunctionFields(cls, phase):
    """Fields written by quantified or reference assignment in any phase transition."""
    setRslt = set()
    for t in cls.phaseTransitions(phase):
        setRslt |= functionWrites(cls, t.effect)
    return setRslt

class Configuration(object):
    """Universes plus interpretations of the immutable fields."""

    def __init__(self, model):
        self.model = model
        self.universes = {c.name: [] for c in model.classes}
        self.owner = {}
        self.sets = {}
        self.params = {}
        self.gamma = []

    def addInstance(self, cls, name):
        self.universes[cls].append(name)
        self.owner[name] = cls

    def instances(self):
        for c in self.model.classes:
            for inst in self.universes[c.name]:
                yield inst

    def setOf(self, inst, name):
        return self.sets.get((inst, name), frozenset())

    def param(self, inst, name):
        return self.params[(inst, name)]

    @property
    def size(self):
        return len(self.owner)

    def deriveGrounded(self):
        """Fill grounded object fields from their ghost sets."""
        for c in self.model.classes:
            for fd in c.fieldsOfKind('ground'):
                for inst in self.universes[c.name]:
                    aMember = sorted(self.setOf(inst, fd.source))
                    self.params[(inst, fd.name)] = aMember[0] if len(aMember) == 1 else None

    def gammaHolds(self):
        return all(ok for _, ok in self.gamma)

    def __repr__(self):
        return 'Configuration({})'.format(', '.join('{}={}'.format(c, u) for c, u in self.universes.items()))

class GlobalState(object):
    """Mutable valuation of every instance's state fields plus the scheduler phase.

    Timers are stored as ints: 0 is inactive, n >= 1 is Active(n).
    """

    def __init__(self, vals, phase):
        self.vals = vals
        self.phase = phase

    def copy(self):
        return GlobalState({k: dict(v) for k, v in self.vals.items()}, self.phase)

    def get(self, inst, name):
        return self.vals[inst][name]

    def set(self, inst, name, value):
        self.vals[inst][name] = value

    def key(self):
        return (self.phase, tuple((inst, tuple(sorted(v.items()))) for inst, v in sorted(self.vals.items())))

    def __eq__(self, other):
        return isinstance(other, GlobalState) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return 'GlobalState(phase={}, {})'.format(self.phase, self.vals)

    def toJson(self, model, cfg):
        """Instance -> field -> value, in declaration order."""
        dictRslt = {}
        for c in model.classes:
            for inst in cfg.universes[c.name]:
                dictInst = {}
                for fd in c.stateFields:
                    v = self.vals[inst][fd.name]
                    if fd.ty == TTimer:
                        v = v if v > 0 else 'inactive'
                    dictInst[fd.name] = v
                dictRslt[inst] = dictInst
        return dictRslt
