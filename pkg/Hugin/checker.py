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

"""Language restrictions that the grammar alone cannot express.

Every violation is reported; nothing stops at the first one.
"""

from . import diagnostics as dg
from .diagnostics import Sink
from .expr import (BoolLit, Field, SelfRef, AllSet, PhaseRef, Old, Quant,
        Assign, HavocStmt, If, QuantAssign, RefAssign, Assume, Assert, walk, conjuncts)
from .model import functionWrites

def _spanOf(node, fallback):
    return node.span if node is not None and node.span is not None else fallback

class _Checker(object):
    def __init__(self, model):
        self.model = model
        self.sink = Sink(model.source)

    def fieldDecl(self, clsName, name):
        if not self.model.hasClass(clsName):
            return None
        return self.model.cls(clsName).field(name)

    def noOld(self, e, where, fallback):
        for x in walk(e):
            if isinstance(x, Old):
                self.sink.error(dg.OLD_IN_SOURCE, "old() is not allowed in {}".format(where), _spanOf(x, fallback))
                return

    # Classes

    def checkClass(self, cls):
        fdLoc = cls.location
        if fdLoc is None or fdLoc.kind != 'var' or fdLoc.ty is None or fdLoc.ty.kind != 'enum':
            self.sink.error(dg.LOCATION_DECL, "class '{}' needs a 'var location' of an enum type".format(cls.name), cls.span)
        for fd in cls.fieldsOfKind('var'):
            if fd.init is None:
                self.sink.warning(dg.NO_INIT, "field '{}.{}' has no initial value".format(cls.name, fd.name), fd.span)
                continue
            for x in walk(fd.init):
                if isinstance(x, (Field, PhaseRef, AllSet, Old)):
                    self.sink.error(dg.TYPE_ERROR, "initial value of '{}.{}' must be a constant".format(cls.name, fd.name), _spanOf(x, fd.span))
                    break
        for t in cls.transitions:
            self.checkGuard(cls, t)
            self.checkEffect(cls, t)

    def checkGuard(self, cls, t):
        self.noOld(t.guard, 'a guard', t.span)
        for c in conjuncts(t.guard):
            if isinstance(c, Field) and isinstance(c.obj, SelfRef) and c.cls == cls.name:
                fd = cls.field(c.name)
                if fd is not None and fd.kind == 'event':
                    continue
            for x in walk(c):
                if isinstance(x, Field):
                    fd = self.fieldDecl(x.cls, x.name)
                    if fd is not None and fd.kind == 'event':
                        self.sink.error(dg.GUARD_SHAPE,
                            "event '{}' may only appear as a bare conjunct of its own class's guard".format(x.name),
                            _spanOf(x, t.span))
                        break

    def checkTarget(self, clsName, name, rhs, node):
        fd = self.fieldDecl(clsName, name)
        if fd is None:
            return
        sp = _spanOf(node, None)
        if name == 'location':
            self.sink.error(dg.LOCATION_ASSIGNED, "location changes only through transition end locations", sp)
        elif fd.kind == 'executed':
            self.sink.error(dg.EXECUTED_ASSIGNED, "the executed flag belongs to the scheduler", sp)
        elif fd.kind == 'input':
            self.sink.error(dg.INPUT_ASSIGNED, "input '{}' is externally controlled and cannot be assigned".format(name), sp)
        elif fd.kind in ('param', 'set', 'ground'):
            self.sink.error(dg.IMMUTABLE_ASSIGNED, "'{}' is part of the configuration and cannot be assigned".format(name), sp)
        elif fd.kind == 'event' and rhs != BoolLit(True):
            self.sink.error(dg.EVENT_NOT_TRUE, "event '{}' may only be assigned true".format(name), sp)

    def checkStmts(self, cls, aStmt, t):
        for s in aStmt:
            if isinstance(s, Assign):
                self.checkTarget(cls.name, s.name, s.rhs, s)
                self.noOld(s.rhs, 'an effect', t.span)
            elif isinstance(s, HavocStmt):
                self.checkTarget(cls.name, s.name, None, s)
            elif isinstance(s, (QuantAssign, RefAssign)):
                self.checkTarget(s.cls, s.name, s.rhs, s)
                self.noOld(s.rhs, 'an effect', t.span)
                if isinstance(s, QuantAssign):
                    self.noOld(s.rng, 'an effect', t.span)
            elif isinstance(s, If):
                self.noOld(s.cond, 'an effect', t.span)
                self.checkStmts(cls, s.then, t)
                self.checkStmts(cls, s.orelse, t)
            elif isinstance(s, (Assume, Assert)):
                self.noOld(s.e, 'an effect', t.span)

    def checkEffect(self, cls, t):
        self.checkStmts(cls, t.effect, t)
        setFn = {f for c, f in functionWrites(cls, t.effect) if c == cls.name}
        setDirect = set()
        def direct(aStmt):
            for s in aStmt:
                if isinstance(s, (Assign, HavocStmt)):
                    setDirect.add(s.name)
                elif isinstance(s, If):
                    direct(s.then)
                    direct(s.orelse)
        direct(t.effect)
        for name in sorted(setFn & setDirect):
            self.sink.error(dg.MIXED_WRITE,
                "'{}.{}' is written both directly and through a quantified assignment in '{}'".format(cls.name, name, t.name),
                t.span)

    # Scheduler

    def checkScheduler(self, sched):
        if not sched.phases:
            return
        if sched.initial == sched.final:
            self.sink.error(dg.SCHEDULER, "initial and final phase must differ", sched.span)
        setSeen = {sched.initial}
        aQueue = [sched.initial]
        while aQueue:
            p = aQueue.pop()
            for t in sched.outgoing(p):
                if t.dst not in setSeen:
                    setSeen.add(t.dst)
                    aQueue.append(t.dst)
        for p in sched.phases:
            if p not in setSeen:
                self.sink.error(dg.SCHEDULER, "phase '{}' is unreachable from '{}'".format(p, sched.initial), sched.span)
        for t in sched.transitions:
            if t.src == sched.final:
                self.sink.error(dg.SCHEDULER, "the final phase returns to the initial phase implicitly", t.span)
            self.noOld(t.guard, 'a scheduler guard', t.span)
            for x in walk(t.guard):
                if isinstance(x, Field):
                    fd = self.fieldDecl(x.cls, x.name)
                    if fd is not None and fd.kind not in ('event', 'timer', 'executed'):
                        self.sink.error(dg.SCHED_GUARD,
                            "scheduler guards may read only events, timers and executed flags, not '{}'".format(x.name),
                            _spanOf(x, t.span))
                elif isinstance(x, Quant) and not isinstance(x.rng, AllSet):
                    self.sink.error(dg.SCHED_GUARD, "scheduler guards may quantify only over All", _spanOf(x, t.span))
                elif isinstance(x, PhaseRef):
                    self.sink.error(dg.SCHED_GUARD, "scheduler guards cannot read the phase", _spanOf(x, t.span))

    # Constraints

    def checkConstraints(self):
        for c in self.model.constraints:
            self.noOld(c.expr, 'a constraint', c.span)
            for x in walk(c.expr):
                bad = isinstance(x, PhaseRef)
                if isinstance(x, Field):
                    fd = self.fieldDecl(x.cls, x.name)
                    bad = fd is not None and fd.kind not in ('param', 'set', 'ground')
                if bad:
                    self.sink.error(dg.CONSTRAINT_MUTABLE,
                        "constraint '{}' may mention only sets, parameters and All".format(c.label), _spanOf(x, c.span))

    def run(self):
        for cls in self.model.classes:
            self.checkClass(cls)
        self.checkScheduler(self.model.scheduler)
        self.checkConstraints()
        self.sink.raiseIfErrors()
        return [d for d in self.sink.aDiag if not d.isError]

def checkModel(model):
    """Raise FrontendError on any restriction violation; return the warnings."""
    return _Checker(model).run()
