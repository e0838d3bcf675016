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

"""Differential harnesses tying contracts, checks and grounding to the simulator.

Every harness is seeded; a sample's own seed is "<seed>:<index>" so a
failure can be replayed alone.
"""

import itertools
import random
from collections import deque
from dataclasses import dataclass, field

from .diagnostics import HuginError, SimulationError, ContractError, OracleError
from .expr import (TInt, TBool, IntLit, BoolLit, EnumLit, SelfRef, Bound, Field, Unary, Binary, Ite, Quant, Havoc,
        Assign, HavocStmt, If, QuantAssign, walk, freshName)
from .model import Configuration, GlobalState
from .contractgen import execContract, initContract, tickContract, transformEffect, havocRefs, resolveHavoc
from .simulator import (EXHAUSTIVE_CAP, valuesOf, evaluate, execStmts, execLocal, tick, initState, changePhase,
        resetState, enabledSchedTrans, InputProvider, OrderPolicy, run)
from .grounding import groundStatements, groundConfiguration
from .logging import logger

GAMMA_RETRIES = 10000
INT_RANGE = (-2, 4)

@dataclass
class OracleReport:
    name: str
    samples: int = 0
    sound: int = 0
    precise: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return not self.failures

    @property
    def soundRate(self):
        return self.sound / self.samples if self.samples else 1.0

    @property
    def precisionRate(self):
        return self.precise / self.samples if self.samples else 1.0

    def toJson(self):
        return {'name': self.name, 'passed': self.passed, 'samples': self.samples, 'skipped': self.skipped,
            'soundRate': self.soundRate, 'precisionRate': self.precisionRate,
            'failures': self.failures[:20], 'details': self.details}

def sampleRng(seed, i):
    return random.Random('{}:{}'.format(seed, i))

# Configurations and states

def randomConfiguration(model, rng, maxUniverse=3, minUniverse=1, retries=GAMMA_RETRIES):
    """A random configuration satisfying every constraint, by rejection sampling."""
    for _ in range(retries):
        cfg = Configuration(model)
        for c in model.classes:
            for i in range(rng.randint(minUniverse, maxUniverse)):
                cfg.addInstance(c.name, '{}{}'.format(c.name.lower(), i))
        for c in model.classes:
            for inst in cfg.universes[c.name]:
                for fd in c.fieldsOfKind('set'):
                    cfg.sets[(inst, fd.name)] = frozenset(x for x in cfg.universes[fd.ty.name] if rng.random() < 0.5)
                for fd in c.fieldsOfKind('param'):
                    aVal = valuesOf(fd.ty, model, cfg, INT_RANGE)
                    if fd.ty.kind == 'obj':
                        aVal = [x for x in aVal if x is not None] or [None]
                    cfg.params[(inst, fd.name)] = rng.choice(aVal)
        cfg.deriveGrounded()
        cfg.gamma = [(cons.label, bool(evaluate(cons.expr, cfg, None))) for cons in model.constraints]
        if cfg.gammaHolds():
            return cfg
    raise OracleError("No configuration satisfying the constraints after {} attempts".format(retries))

def randomState(model, cfg, rng, phase=None):
    vals = {}
    for c in model.classes:
        for inst in cfg.universes[c.name]:
            vals[inst] = {fd.name: rng.choice(valuesOf(fd.ty, model, cfg, INT_RANGE)) for fd in c.stateFields}
            for fd in c.fieldsOfKind('timer'):
                vals[inst][fd.name] = rng.randint(0, 3)
    return GlobalState(vals, phase or rng.choice(model.scheduler.phases))

# Contracts against concrete execution

def _check(report, ok, nTrue, what):
    report.samples += 1
    if ok:
        report.sound += 1
    else:
        report.failures.append(what)
    if nTrue == 1:
        report.precise += 1

def contractVsSimulator(model, samples=1000, seed=0, maxUniverse=3):
    """Every generated contract holds on concrete init, exec and tick steps.

    Precision counts exec samples where exactly one disjunct holds.
    """
    report = OracleReport('contract-vs-simulator')
    dictContract = {}
    for c in model.classes:
        for p in model.scheduler.phases:
            try:
                dictContract[(c.name, p)] = execContract(c, p, model)
            except ContractError as e:
                logger.warning("No contract for {}/{}: {}".format(c.name, p, e))
    for i in range(samples):
        rng = sampleRng(seed, i)
        cfg = randomConfiguration(model, rng, maxUniverse)
        pre = randomState(model, cfg, rng)
        sInit = initState(model, cfg, InputProvider.random(rng.randrange(1 << 30), INT_RANGE))
        for c in model.classes:
            if not cfg.universes[c.name]:
                continue
            inst = rng.choice(cfg.universes[c.name])
            env = {'self': inst}
            tag = {'sample': '{}:{}'.format(seed, i), 'class': c.name, 'instance': inst}
            ok = evaluate(initContract(c).formula, cfg, sInit, None, env)
            _check(report, ok, 1, dict(tag, phase='init'))
            sTick = tick(model, cfg, pre.copy(), inst)
            ok = evaluate(tickContract(c).formula, cfg, sTick, pre, env)
            _check(report, ok, 1, dict(tag, phase='tick'))
            for p in model.scheduler.phases:
                con = dictContract.get((c.name, p))
                if con is None:
                    continue
                try:
                    post = execLocal(model, cfg, pre, inst, p, rng)
                except SimulationError:
                    report.skipped += 1
                    continue
                post.set(inst, 'executed', True)
                ok = evaluate(con.formula, cfg, post, pre, env)
                nTrue = sum(1 for _, f in con.disjuncts if evaluate(f, cfg, post, pre, env))
                _check(report, ok, nTrue, dict(tag, phase=p))
    report.details = {'contracts': len(dictContract)}
    return report

# Symbolic effect maps against concrete execution

_SIMPLE = ('int', 'bool', 'enum')

def _tyKind(ty):
    if ty == TInt: return 'int'
    if ty == TBool: return 'bool'
    return ty.kind

class EffectGenerator(object):
    """Random effects over the fields of one class, using every statement form."""

    def __init__(self, model, cls, rng, maxDepth=4):
        self.model = model
        self.cls = cls
        self.rng = rng
        self.maxDepth = maxDepth
        self.aWrite = [fd for fd in cls.fieldsOfKind('var') if fd.name != 'location' and _tyKind(fd.ty) in _SIMPLE]
        self.aRead = [fd for fd in cls.fieldsOfKind('var', 'input', 'event') if _tyKind(fd.ty) in _SIMPLE]
        self.aSet = []
        for fd in cls.fieldsOfKind('set'):
            elem = model.cls(fd.ty.name)
            if elem.name == cls.name:
                continue
            aTarget = [f for f in elem.fieldsOfKind('var') if f.name != 'location' and _tyKind(f.ty) in _SIMPLE]
            if aTarget:
                self.aSet.append((fd, elem, aTarget))

    def own(self, fd):
        return Field(SelfRef(self.cls.name), self.cls.name, fd.name)

    def const(self, ty):
        k = _tyKind(ty)
        if k == 'int':
            return IntLit(self.rng.randint(-2, 3))
        if k == 'bool':
            return BoolLit(self.rng.random() < 0.5)
        return EnumLit(ty.name, self.rng.choice(self.model.enum(ty.name).values))

    def expr(self, ty, depth, aExtra=()):
        """An expression of type `ty`; `aExtra` adds (expr, ty) leaves such as a bound variable's fields."""
        aLeaf = [self.own(fd) for fd in self.aRead if fd.ty == ty] + [e for e, t in aExtra if t == ty]
        roll = self.rng.random()
        if depth <= 1 or roll < 0.4:
            if aLeaf and self.rng.random() < 0.6:
                return self.rng.choice(aLeaf)
            return self.const(ty)
        if roll < 0.55:
            return Ite(self.expr(TBool, depth - 1, aExtra), self.expr(ty, depth - 1, aExtra), self.expr(ty, depth - 1, aExtra))
        k = _tyKind(ty)
        if k == 'int':
            return Binary(self.rng.choice(['+', '-']), self.expr(ty, depth - 1, aExtra), self.expr(ty, depth - 1, aExtra))
        if k == 'bool':
            pick = self.rng.randrange(4)
            if pick == 0:
                return Unary('!', self.expr(ty, depth - 1, aExtra))
            if pick == 1:
                return Binary(self.rng.choice(['&&', '||']), self.expr(ty, depth - 1, aExtra), self.expr(ty, depth - 1, aExtra))
            if pick == 2 and self.aSet:
                fd, elem, _ = self.rng.choice(self.aSet)
                aBool = [f for f in elem.fieldsOfKind('var', 'input', 'event') if f.ty == TBool]
                if aBool:
                    v = freshName('q')
                    return Quant(self.rng.choice(['forall', 'exists']), v, elem.name, self.own(fd),
                        Field(Bound(v, elem.name), elem.name, self.rng.choice(aBool).name))
            return Binary(self.rng.choice(['<', '==', '>=']), self.expr(TInt, depth - 1, aExtra), self.expr(TInt, depth - 1, aExtra))
        return self.const(ty)

    def stmts(self, depth, n=None):
        aStmt = []
        for _ in range(n if n is not None else self.rng.randint(1, 3)):
            s = self.stmt(depth)
            if s is not None:
                aStmt.append(s)
        return tuple(aStmt)

    def stmt(self, depth):
        roll = self.rng.random()
        if depth > 1 and roll < 0.25:
            return If(self.expr(TBool, 2), self.stmts(depth - 1), self.stmts(depth - 1, self.rng.randint(0, 2)))
        if self.aSet and roll < 0.45:
            fd, elem, aTarget = self.rng.choice(self.aSet)
            tgt = self.rng.choice(aTarget)
            v = freshName('x')
            x = Bound(v, elem.name)
            aExtra = [(Field(x, elem.name, f.name), f.ty) for f in elem.fieldsOfKind('var', 'input', 'event')]
            return QuantAssign(v, elem.name, self.own(fd), tgt.name, self.expr(tgt.ty, 3, aExtra))
        if not self.aWrite:
            return None
        fd = self.rng.choice(self.aWrite)
        if roll < 0.55:
            return HavocStmt(fd.name)
        return Assign(fd.name, self.expr(fd.ty, 3))

def _hasHavoc(e):
    return any(isinstance(x, Havoc) for x in walk(e))

def compareEffect(model, cfg, cls, aStmt, pre, inst, rng):
    """Mismatches between the symbolic map of `aStmt` and running it on `pre`.

    Havoc draws kept by their field are read from the post-state; a draw
    that was overwritten has nothing to compare against.
    """
    m = transformEffect(aStmt, cls, model)
    dictRef = havocRefs(m)
    post = execStmts(model, cfg, pre.copy(), inst, aStmt, rng)
    env = {'self': inst}
    aMismatch = []
    for name, v in m.scalars.items():
        if isinstance(v, Havoc) and v in dictRef:
            continue
        v = resolveHavoc(v, dictRef)
        if _hasHavoc(v):
            continue
        want = evaluate(v, cfg, post, pre, env)
        if want != post.get(inst, name):
            aMismatch.append((inst, name, want, post.get(inst, name)))
    for (clsName, name), lam in m.functions.items():
        body = resolveHavoc(lam.body, dictRef)
        if _hasHavoc(body):
            continue
        for y in cfg.universes[clsName]:
            want = evaluate(body, cfg, post, pre, dict(env, **{lam.var: y}))
            if want != post.get(y, name):
                aMismatch.append((y, name, want, post.get(y, name)))
    for fd in cls.stateFields:
        if fd.name not in m.scalars and (cls.name, fd.name) not in m.functions and post.get(inst, fd.name) != pre.get(inst, fd.name):
            aMismatch.append((inst, fd.name, pre.get(inst, fd.name), post.get(inst, fd.name)))
    return aMismatch

def effectMapOracle(model, randomEffects=200, preStates=100, seed=0, maxDepth=4, maxUniverse=3):
    """Corpus effects plus random ones: map evaluation equals concrete execution."""
    report = OracleReport('effect-map')
    rng = random.Random(seed)
    aEffect = []
    for c in model.classes:
        for t in c.transitions:
            aEffect.append((c, t.effect, 'transition {}.{}'.format(c.name, t.name)))
    aCls = []
    for c in model.classes:
        gen = EffectGenerator(model, c, rng)
        if gen.aWrite or gen.aSet:
            aCls.append(c)
    for i in range(randomEffects if aCls else 0):
        c = aCls[i % len(aCls)]
        gen = EffectGenerator(model, c, sampleRng(seed, i), maxDepth)
        aEffect.append((c, gen.stmts(maxDepth), 'random {}:{}'.format(seed, i)))
    for iEffect, (c, aStmt, what) in enumerate(aEffect):
        try:
            transformEffect(aStmt, c, model)
        except ContractError:
            report.skipped += 1
            continue
        for j in range(preStates):
            rngJ = sampleRng('{}/{}'.format(seed, iEffect), j)
            cfg = randomConfiguration(model, rngJ, maxUniverse)
            if not cfg.universes[c.name]:
                continue
            pre = randomState(model, cfg, rngJ)
            inst = rngJ.choice(cfg.universes[c.name])
            try:
                aMismatch = compareEffect(model, cfg, c, aStmt, pre, inst, rngJ)
            except SimulationError:
                report.skipped += 1
                continue
            report.samples += 1
            if aMismatch:
                report.failures.append({'effect': what, 'preState': j, 'mismatches': [list(map(str, x)) for x in aMismatch]})
            else:
                report.sound += 1
                report.precise += 1
    report.details = {'effects': len(aEffect)}
    return report

# Bounded reachability

def inputValuations(model, cfg, limit=512, rng=None):
    """Every assignment to the input fields, or `limit` random ones when there are more."""
    aSlot = [(inst, fd) for c in model.classes for fd in c.fieldsOfKind('input') for inst in cfg.universes[c.name]]
    aDomain = [valuesOf(fd.ty, model, cfg) for _, fd in aSlot]
    total = 1
    for d in aDomain:
        total *= len(d)
    if total <= limit:
        aCombo = itertools.product(*aDomain)
    else:
        rng = rng or random.Random(0)
        aCombo = [tuple(rng.choice(d) for d in aDomain) for _ in range(limit)]
    for combo in aCombo:
        yield [(inst, fd.name, v) for (inst, fd), v in zip(aSlot, combo)]

def _withInputs(s, valuation):
    s = s.copy()
    for inst, name, v in valuation:
        s.set(inst, name, v)
    return s

def interleavings(model, cfg, s, cap=EXHAUSTIVE_CAP):
    """End states of every order of one self-loop sweep, sharing work across orders with the same executed set."""
    aInst = list(cfg.instances())
    if len(aInst) > cap:
        raise OracleError("{} instances exceed the exhaustive cap {}".format(len(aInst), cap))
    frontier = {s}
    for _ in aInst:
        nxt = set()
        for x in frontier:
            for inst in aInst:
                if x.get(inst, 'executed'):
                    continue
                y = execLocal(model, cfg, x, inst, x.phase)
                y.set(inst, 'executed', True)
                nxt.add(y)
        frontier = nxt
    return frontier

@dataclass
class ReachReport:
    states: int = 0
    violation: str = None
    trace: list = field(default_factory=list)

    @property
    def passed(self):
        return self.violation is None

    def toJson(self, model, cfg):
        return {'passed': self.passed, 'states': self.states, 'violation': self.violation,
            'trace': [{'label': lb, 'phase': s.phase, 'state': s.toJson(model, cfg)} for lb, s in self.trace]}

def boundedReachabilityCheck(model, cfg, inv, prop, cycles=3, order=None, inputLimit=512, seed=0):
    """Breadth-first search over every run of at most `cycles` cycles.

    Inv is checked at every scheduler step boundary, prop at every final
    phase state. Without an order policy every self-loop interleaving is
    explored.
    """
    sched = model.scheduler
    rng = random.Random(seed)
    report = ReachReport()
    parent = {}
    queue = deque()
    base = initState(model, cfg, InputProvider.scripted([]))
    aValuation = list(inputValuations(model, cfg, inputLimit, rng))
    for val in aValuation:
        s = _withInputs(base, val)
        if s not in parent:
            parent[s] = (None, 'init')
            queue.append((s, 0))

    def fail(s, what):
        aTrace = []
        while s is not None:
            prev, label = parent[s]
            aTrace.append((label, s))
            s = prev
        report.violation = what
        report.trace = list(reversed(aTrace))
        return report

    while queue:
        s, cycle = queue.popleft()
        report.states += 1
        if not evaluate(inv, cfg, s):
            return fail(s, 'invariant')
        if s.phase == sched.final and not evaluate(prop, cfg, s):
            return fail(s, 'property')
        if cycles <= 0 or (s.phase == sched.final and cycle + 1 >= cycles):
            continue
        aNext = []
        if s.phase == sched.final:
            for val in aValuation:
                aNext.append((_withInputs(resetState(model, cfg, s, InputProvider.scripted([]), cycle + 1), val), 'reset', cycle + 1))
        else:
            t = enabledSchedTrans(model, cfg, s)
            if t is None:
                return fail(s, 'deadlock')
            if not t.selfLoop:
                aNext.append((changePhase(model, cfg, s, t.dst), 'phase-change {}->{}'.format(t.src, t.dst), cycle))
            elif order is None:
                aNext += [(y, 'self-loop {}'.format(s.phase), cycle) for y in interleavings(model, cfg, s)]
            else:
                y = s.copy()
                for inst in order.order(cfg, s.phase):
                    y = execLocal(model, cfg, y, inst, s.phase)
                    y.set(inst, 'executed', True)
                aNext.append((y, 'self-loop {}'.format(s.phase), cycle))
        for y, label, c in aNext:
            if y not in parent:
                parent[y] = (s, label)
                queue.append((y, c))
    return report

def theoremAgreement(model, inv, prop, configurations=20, cycles=3, seed=0, maxUniverse=2):
    """Bounded exhaustive search on random configurations; any violation is a failure."""
    report = OracleReport('bounded-reachability')
    for i in range(configurations):
        rng = sampleRng(seed, i)
        cfg = randomConfiguration(model, rng, maxUniverse)
        if cfg.size > EXHAUSTIVE_CAP:
            report.skipped += 1
            continue
        rr = boundedReachabilityCheck(model, cfg, inv, prop, cycles, seed=rng.randrange(1 << 30))
        report.samples += 1
        report.details.setdefault('states', 0)
        report.details['states'] += rr.states
        if rr.passed:
            report.sound += 1
            report.precise += 1
        else:
            report.failures.append({'sample': '{}:{}'.format(seed, i), 'configuration': repr(cfg),
                'violation': rr.violation, 'trace': rr.toJson(model, cfg)['trace']})
    return report

# Grounding

def groundingEquivalence(model, p, seeds=20, cycles=3, maxUniverse=3):
    """Runs of the grounded and the original model are identical state by state."""
    report = OracleReport('grounding-equivalence')
    grounded = groundStatements(model, p)
    for seed in range(seeds):
        rng = random.Random(seed)
        cfg = randomConfiguration(model, rng, maxUniverse)
        cfgG = groundConfiguration(cfg, grounded)
        try:
            rA = run(model, cfg, OrderPolicy.seeded(seed), InputProvider.random(seed), cycles)
        except HuginError:
            report.skipped += 1
            continue
        rB = run(grounded, cfgG, OrderPolicy.seeded(seed), InputProvider.random(seed), cycles)
        report.samples += 1
        aDiff = [a.step for a, b in zip(rA.trace, rB.trace) if a.state != b.state or a.label != b.label]
        if aDiff or len(rA.trace) != len(rB.trace):
            report.failures.append({'seed': seed, 'firstDifference': aDiff[0] if aDiff else min(len(rA.trace), len(rB.trace))})
        else:
            report.sound += 1
            report.precise += 1
    return report
