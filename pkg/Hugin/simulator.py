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

"""Concrete semantics: expression evaluation, local exec, scheduler steps and runs."""

import json
import random
from collections import namedtuple

from .diagnostics import SimulationError, SchedulerError
from .expr import (TInt, TBool, TTimer, IntLit, BoolLit, EnumLit, NullLit, TimerOff, TimerOn, TimerActive, TimerLeft,
        SelfRef, ObjConst, Bound, AllSet, PhaseRef, Havoc, Field, Old, Unary, Binary, Ite, Card, Quant, Lambda,
        Assign, HavocStmt, If, QuantAssign, RefAssign, Assume, Assert)
from .model import GlobalState
from .logging import logger

MAX_STEPS = 10000
EXHAUSTIVE_CAP = 6

# Values

def valuesOf(ty, model, cfg, intRange=(0, 3)):
    """Finite candidate values of a type; Int and Timer use `intRange`."""
    if ty == TBool:
        return [False, True]
    if ty == TInt:
        return list(range(intRange[0], intRange[1] + 1))
    if ty == TTimer:
        return list(range(0, max(intRange[1], 0) + 1))
    if ty.kind == 'enum':
        return list(model.enum(ty.name).values)
    if ty.kind == 'obj':
        return list(cfg.universes[ty.name]) + [None]
    raise SimulationError("No finite domain for {}".format(ty))

def defaultOf(ty, model):
    if ty == TBool: return False
    if ty in (TInt, TTimer): return 0
    if ty.kind == 'enum': return model.enum(ty.name).values[0]
    return None

# Expressions

def _fieldValue(cfg, s, obj, fd, cls, name):
    if fd.kind == 'set':
        return cfg.setOf(obj, name)
    if fd.kind in ('param', 'ground'):
        return cfg.params.get((obj, name))
    if s is None:
        raise SimulationError("Unbound state symbol {}.{}".format(obj, name))
    try:
        return s.get(obj, name)
    except KeyError:
        raise SimulationError("Unbound state symbol {}.{}".format(obj, name))

def evaluate(e, cfg, s, pre=None, env=None):
    """Value of `e`: ints, bools, enum value names, instance names, None, frozensets."""
    env = env or {}
    if isinstance(e, (IntLit, BoolLit)):
        return e.value
    if isinstance(e, EnumLit):
        return e.value
    if isinstance(e, NullLit):
        return None
    if isinstance(e, TimerOff):
        return 0
    if isinstance(e, TimerOn):
        return max(evaluate(e.e, cfg, s, pre, env), 0)
    if isinstance(e, SelfRef):
        if 'self' not in env:
            raise SimulationError("'self' is unbound")
        return env['self']
    if isinstance(e, ObjConst):
        return e.name
    if isinstance(e, Bound):
        if e.name not in env:
            raise SimulationError("Unbound variable {}".format(e.name))
        return env[e.name]
    if isinstance(e, AllSet):
        return frozenset(cfg.universes[e.cls])
    if isinstance(e, PhaseRef):
        if s is None:
            raise SimulationError("Unbound symbol phase")
        return s.phase
    if isinstance(e, Field):
        obj = evaluate(e.obj, cfg, s, pre, env)
        if obj is None:
            raise SimulationError("Null dereference reading {}".format(e.name))
        fd = cfg.model.cls(e.cls).field(e.name)
        if fd is None:
            raise SimulationError("Unknown field {}.{}".format(e.cls, e.name))
        return _fieldValue(cfg, s, obj, fd, e.cls, e.name)
    if isinstance(e, Old):
        if pre is None:
            raise SimulationError("old() without a pre-state")
        return evaluate(e.e, cfg, pre, None, env)
    if isinstance(e, TimerActive):
        return evaluate(e.e, cfg, s, pre, env) > 0
    if isinstance(e, TimerLeft):
        return evaluate(e.e, cfg, s, pre, env)
    if isinstance(e, Unary):
        v = evaluate(e.e, cfg, s, pre, env)
        return (not v) if e.op == '!' else -v
    if isinstance(e, Binary):
        return _binary(e, cfg, s, pre, env)
    if isinstance(e, Ite):
        if evaluate(e.c, cfg, s, pre, env):
            return evaluate(e.a, cfg, s, pre, env)
        return evaluate(e.b, cfg, s, pre, env)
    if isinstance(e, Card):
        return len(evaluate(e.e, cfg, s, pre, env))
    if isinstance(e, Quant):
        rng = evaluate(e.rng, cfg, s, pre, env)
        aVal = (evaluate(e.body, cfg, s, pre, dict(env, **{e.var: x})) for x in sorted(rng))
        return all(aVal) if e.kind == 'forall' else any(aVal)
    if isinstance(e, Lambda):
        return lambda x: evaluate(e.body, cfg, s, pre, dict(env, **{e.var: x}))
    if isinstance(e, Havoc):
        raise SimulationError("Havoc has no value")
    raise SimulationError("Cannot evaluate {!r}".format(e))

def _binary(e, cfg, s, pre, env):
    op = e.op
    a = evaluate(e.a, cfg, s, pre, env)
    if op == '&&':
        return bool(a) and bool(evaluate(e.b, cfg, s, pre, env))
    if op == '||':
        return bool(a) or bool(evaluate(e.b, cfg, s, pre, env))
    if op == '==>':
        return (not a) or bool(evaluate(e.b, cfg, s, pre, env))
    b = evaluate(e.b, cfg, s, pre, env)
    if op == '<==>': return bool(a) == bool(b)
    if op == '==': return a == b
    if op == '!=': return a != b
    if op == '<': return a < b
    if op == '<=': return a <= b
    if op == '>': return a > b
    if op == '>=': return a >= b
    if op == '+': return a + b
    if op == '-': return a - b
    if op == '*': return a * b
    if op == 'in': return a in b
    if op == 'subset': return a <= b
    if op == 'disjoint': return not (a & b)
    if op == 'union': return a | b
    raise SimulationError("Unknown operator {}".format(op))

# Inputs and orders

class InputProvider(object):
    """Values for input fields at init and after every reset."""

    def __init__(self, kind, cycles=None, seed=0, intRange=(0, 3)):
        self.kind = kind
        self.cycles = cycles or []
        self.seed = seed
        self.intRange = intRange
        self.rng = random.Random(seed)

    @classmethod
    def scripted(cls, cycles):
        return cls('scripted', cycles=list(cycles))

    @classmethod
    def random(cls, seed=0, intRange=(0, 3)):
        return cls('random', seed=seed, intRange=intRange)

    @classmethod
    def fromJson(cls, obj):
        if 'seed' in obj and 'cycles' not in obj:
            return cls.random(obj['seed'])
        return cls.scripted(obj.get('cycles', []))

    def validate(self, model, cfg):
        for dictCycle in self.cycles:
            for inst, dictVal in dictCycle.items():
                if inst not in cfg.owner:
                    raise SimulationError("Scripted input for unknown instance {}".format(inst))
                cls = model.cls(cfg.owner[inst])
                for name in dictVal:
                    fd = cls.field(name)
                    if fd is None or fd.kind != 'input':
                        raise SimulationError("Scripted value for {}.{}, which is not an input".format(inst, name))

    def provide(self, model, cfg, s, cycle):
        """Set every input of `s` in place for cycle number `cycle`."""
        if self.kind == 'scripted':
            if not self.cycles:
                dictCycle = {}
            else:
                dictCycle = self.cycles[min(cycle, len(self.cycles) - 1)]
        for c in model.classes:
            for fd in c.fieldsOfKind('input'):
                for inst in cfg.universes[c.name]:
                    if self.kind == 'random':
                        v = self.rng.choice(valuesOf(fd.ty, model, cfg, self.intRange))
                    elif fd.name in dictCycle.get(inst, {}):
                        v = dictCycle[inst][fd.name]
                    elif cycle == 0:
                        v = defaultOf(fd.ty, model)
                    else:
                        continue
                    s.set(inst, fd.name, v)

class OrderPolicy(object):
    """Instance order for each self-loop sweep."""

    def __init__(self, kind, seed=0, fixed=None, cap=EXHAUSTIVE_CAP):
        self.kind = kind
        self.seed = seed
        self.fixed = fixed
        self.cap = cap
        self.rng = random.Random(seed)

    @classmethod
    def seeded(cls, seed=0):
        return cls('seeded', seed=seed)

    @classmethod
    def fixedOrder(cls, order):
        """`order` is a list of instances for every phase, or a dict phase -> list."""
        return cls('fixed', fixed=order)

    @classmethod
    def exhaustive(cls, cap=EXHAUSTIVE_CAP):
        return cls('exhaustive', cap=cap)

    @classmethod
    def parse(cls, txt):
        """seed:N, fixed:a,b,c or fixed:Phase=a,b;Phase2=c,d, exhaustive."""
        kind, _, rest = txt.partition(':')
        if kind == 'seed':
            return cls.seeded(int(rest or 0))
        if kind == 'exhaustive':
            return cls.exhaustive(int(rest) if rest else EXHAUSTIVE_CAP)
        if kind == 'fixed':
            if '=' in rest:
                dictOrder = {}
                for item in rest.split(';'):
                    phase, _, lst = item.partition('=')
                    dictOrder[phase.strip()] = [x.strip() for x in lst.split(',') if x.strip()]
                return cls.fixedOrder(dictOrder)
            return cls.fixedOrder([x.strip() for x in rest.split(',') if x.strip()])
        raise ValueError("Unknown order policy '{}'".format(txt))

    def order(self, cfg, phase):
        aAll = list(cfg.instances())
        if self.kind == 'seeded':
            self.rng.shuffle(aAll)
            return aAll
        if self.kind == 'fixed':
            aOrder = self.fixed.get(phase, aAll) if isinstance(self.fixed, dict) else self.fixed
            if sorted(aOrder) != sorted(aAll):
                raise SimulationError("Fixed order {} is not a permutation of {}".format(aOrder, aAll))
            return list(aOrder)
        raise SimulationError("The exhaustive policy enumerates orders; use the reachability oracle")

# Local execution

def initState(model, cfg, inputs):
    vals = {}
    for c in model.classes:
        for inst in cfg.universes[c.name]:
            dictVal = {}
            for fd in c.stateFields:
                if fd.kind == 'var':
                    if fd.init is None:
                        raise SimulationError("Field {}.{} has no initial value".format(c.name, fd.name))
                    dictVal[fd.name] = evaluate(fd.init, cfg, None)
                else:
                    dictVal[fd.name] = defaultOf(fd.ty, model)
            vals[inst] = dictVal
    s = GlobalState(vals, model.scheduler.initial)
    inputs.provide(model, cfg, s, 0)
    return s

def enabledTransition(model, cfg, s, inst, phase):
    """The transition exec would fire, or None for a stutter."""
    cls = model.cls(cfg.owner[inst])
    loc = s.get(inst, 'location')
    for t in cls.transitions:
        if t.phase == phase and t.start == loc and evaluate(t.guard, cfg, s, None, {'self': inst}):
            return t
    return None

def _havoc(fd, model, cfg, rng):
    return rng.choice(valuesOf(fd.ty, model, cfg))

def execStmts(model, cfg, s, inst, aStmt, rng=None):
    """Run statements on `s` in place."""
    env = {'self': inst}
    cls = model.cls(cfg.owner[inst])
    for st in aStmt:
        if isinstance(st, Assign):
            s.set(inst, st.name, evaluate(st.rhs, cfg, s, None, env))
        elif isinstance(st, HavocStmt):
            s.set(inst, st.name, _havoc(cls.field(st.name), model, cfg, rng or random.Random(0)))
        elif isinstance(st, QuantAssign):
            rngSet = evaluate(st.rng, cfg, s, None, env)
            aNew = [(y, evaluate(st.rhs, cfg, s, None, dict(env, **{st.var: y}))) for y in sorted(rngSet)]
            for y, v in aNew:
                s.set(y, st.name, v)
        elif isinstance(st, RefAssign):
            obj = evaluate(st.obj, cfg, s, None, env)
            if obj is None:
                raise SimulationError("Null dereference assigning {}".format(st.name))
            s.set(obj, st.name, evaluate(st.rhs, cfg, s, None, env))
        elif isinstance(st, If):
            if evaluate(st.cond, cfg, s, None, env):
                execStmts(model, cfg, s, inst, st.then, rng)
            else:
                execStmts(model, cfg, s, inst, st.orelse, rng)
        elif isinstance(st, Assume):
            if not evaluate(st.e, cfg, s, None, env):
                raise SimulationError("Assumption does not hold in {}".format(inst))
        elif isinstance(st, Assert):
            if not evaluate(st.e, cfg, s, None, env):
                raise SimulationError("Assertion failed in {}".format(inst))
    return s

def fire(model, cfg, s, inst, t, rng=None):
    """Apply transition `t` of `inst` to `s` in place."""
    cls = model.cls(cfg.owner[inst])
    execStmts(model, cfg, s, inst, t.effect, rng)
    s.set(inst, 'location', t.end)
    for ev in t.guardEvents(cls):
        s.set(inst, ev, False)
    return s

def execLocal(model, cfg, s, inst, phase, rng=None):
    """Post-state of one exec call; the executed flag is left alone."""
    sNew = s.copy()
    t = enabledTransition(model, cfg, s, inst, phase)
    if t is not None:
        fire(model, cfg, sNew, inst, t, rng)
    return sNew

def tick(model, cfg, s, inst):
    cls = model.cls(cfg.owner[inst])
    for fd in cls.fieldsOfKind('timer'):
        v = s.get(inst, fd.name)
        s.set(inst, fd.name, v - 1 if v > 0 else 0)
    return s

# Scheduler

def enabledSchedTrans(model, cfg, s):
    for t in model.scheduler.outgoing(s.phase):
        if evaluate(t.guard, cfg, s):
            return t
    return None

def resetState(model, cfg, s, inputs, cycle):
    sNew = s.copy()
    sNew.phase = model.scheduler.initial
    inputs.provide(model, cfg, sNew, cycle)
    return sNew

def changePhase(model, cfg, s, dst):
    sNew = s.copy()
    sNew.phase = dst
    for inst in cfg.instances():
        sNew.set(inst, 'executed', False)
        if dst == model.scheduler.final:
            tick(model, cfg, sNew, inst)
    return sNew

def selfLoop(model, cfg, s, aOrder, rng=None):
    for inst in aOrder:
        s = execLocal(model, cfg, s, inst, s.phase, rng)
        s.set(inst, 'executed', True)
    return s

def stepScheduler(model, cfg, s, order, inputs, cycle=0, rng=None):
    """One scheduler step: (state, label). Raises SchedulerError on deadlock."""
    sched = model.scheduler
    if s.phase == sched.final:
        return resetState(model, cfg, s, inputs, cycle + 1), {'kind': 'reset'}
    t = enabledSchedTrans(model, cfg, s)
    if t is None:
        raise SchedulerError("Scheduler deadlock in phase {}".format(s.phase))
    if t.selfLoop:
        aOrder = order.order(cfg, s.phase)
        return selfLoop(model, cfg, s, aOrder, rng), {'kind': 'self-loop', 'phase': s.phase, 'order': aOrder}
    return changePhase(model, cfg, s, t.dst), {'kind': 'phase-change', 'from': t.src, 'to': t.dst}

# Runs

TraceStep = namedtuple('TraceStep', ['step', 'label', 'phase', 'state'])

class RunResult(object):
    def __init__(self, trace, violation=None):
        self.trace = trace
        self.violation = violation

    @property
    def passed(self):
        return self.violation is None

    @property
    def final(self):
        return self.trace[-1].state

def run(model, cfg, order, inputs, cycles=1, monitors=(), maxSteps=MAX_STEPS, rng=None):
    """Run `cycles` scheduling cycles, checking each (label, formula) monitor at every final-phase state."""
    inputs.validate(model, cfg)
    s = initState(model, cfg, inputs)
    aTrace = [TraceStep(0, {'kind': 'init'}, s.phase, s.copy())]
    if cycles <= 0:
        return RunResult(aTrace)
    cycle = 0
    nStep = 0
    while True:
        if s.phase == model.scheduler.final:
            for label, f in monitors:
                if not evaluate(f, cfg, s):
                    logger.info("Monitor {} violated in cycle {}".format(label, cycle))
                    return RunResult(aTrace, label)
            if cycle + 1 >= cycles:
                return RunResult(aTrace)
            nStep = 0
        try:
            s, label = stepScheduler(model, cfg, s, order, inputs, cycle, rng)
        except SimulationError as e:
            e.trace = aTrace
            raise
        if label['kind'] == 'reset':
            cycle += 1
        nStep += 1
        if nStep > maxSteps:
            raise SchedulerError("No final phase after {} scheduler steps in cycle {}".format(maxSteps, cycle), aTrace)
        aTrace.append(TraceStep(len(aTrace), label, s.phase, s.copy()))

def traceToJson(model, cfg, trace):
    for st in trace:
        yield {'step': st.step, 'label': st.label, 'phase': st.phase, 'state': st.state.toJson(model, cfg)}

def writeTrace(model, cfg, trace, fpw):
    for obj in traceToJson(model, cfg, trace):
        fpw.write(json.dumps(obj) + '\n')
