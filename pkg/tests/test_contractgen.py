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

import pytest
import hypothesis.strategies as st
from hypothesis import given, settings
from .common import corpus, corpusText

from Hugin.frontend import loadModel, loadConfiguration, parseModel
from Hugin.simulator import InputProvider, OrderPolicy, run, initState, execLocal, tick, evaluate
from Hugin.contractgen import execContract, initContract, tickContract, allContracts, transformEffect
from Hugin.diagnostics import ContractError
from Hugin.expr import Havoc, TimerOn

@pytest.fixture(scope='module')
def robot():
    model = loadModel(corpus('robot.sra'))
    cfg = loadConfiguration(corpus('robot.sracfg'), model)
    return model, cfg

def holds(f, cfg, post, pre, inst):
    return evaluate(f, cfg, post, pre, {'self': inst})

def stepsOf(model, cfg, rslt):
    """(inst, phase, pre, post) for every exec call in a run."""
    for i, x in enumerate(rslt.trace[1:], 1):
        if x.label['kind'] != 'self-loop':
            continue
        s = rslt.trace[i-1].state
        for inst in x.label['order']:
            post = execLocal(model, cfg, s, inst, s.phase)
            post.set(inst, 'executed', True)
            yield inst, s.phase, s, post
            s = post

def test_disjunctLabels(robot):
    model, cfg = robot
    aLabel = [l for l, _ in execContract(model.cls('Controller'), 'Act', model).disjuncts]
    assert aLabel == ['actRight', 'actLeft', 'actForward', 'actStop', 'stutter']
    aLabel = [l for l, _ in execContract(model.cls('Sensor'), 'Act', model).disjuncts]
    assert aLabel == ['resetGo', 'resetNoGo', 'stutter']
    assert [l for l, _ in execContract(model.cls('Sensor'), 'End', model).disjuncts] == ['stutter']

def test_allContracts(robot):
    model, cfg = robot
    aContract = allContracts(model)
    nPhase = len(model.scheduler.phases)
    assert len(aContract) == len(model.classes) * (nPhase + 2)
    assert [c.kind for c in aContract[:nPhase+2]] == ['init'] + ['exec'] * nPhase + ['tick']

def test_initContract(robot):
    model, cfg = robot
    s = initState(model, cfg, InputProvider.random(0))
    for inst in cfg.instances():
        assert holds(initContract(model.cls(cfg.owner[inst])).formula, cfg, s, None, inst)
    s.set('c1', 'direction', 'Left')
    assert not holds(initContract(model.cls('Controller')).formula, cfg, s, None, 'c1')

def test_contractsCoverScenario(robot):
    model, cfg = robot
    inputs = InputProvider.scripted([{'sL': {'obstacle': True}, 'sR1': {'obstacle': False}, 'sR2': {'obstacle': False}}])
    rslt = run(model, cfg, OrderPolicy.parse('fixed:sL,sR1,sR2,c1'), inputs)
    nStep = 0
    for inst, phase, pre, post in stepsOf(model, cfg, rslt):
        c = execContract(model.cls(cfg.owner[inst]), phase, model)
        assert holds(c.formula, cfg, post, pre, inst), (inst, phase)
        nStep += 1
    assert nStep == 4 * 4

@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_contractsCoverRandomRuns(seed):
    model = loadModel(corpus('robot.sra'))
    cfg = loadConfiguration(corpus('robot.sracfg'), model)
    rslt = run(model, cfg, OrderPolicy.seeded(seed), InputProvider.random(seed), cycles=2)
    for inst, phase, pre, post in stepsOf(model, cfg, rslt):
        c = execContract(model.cls(cfg.owner[inst]), phase, model)
        aFired = [l for l, f in c.disjuncts if holds(f, cfg, post, pre, inst)]
        assert len(aFired) == 1, (inst, phase, aFired)

def test_contractRejectsWrongPost(robot):
    model, cfg = robot
    inputs = InputProvider.scripted([{'sL': {'obstacle': True}, 'sR1': {'obstacle': False}, 'sR2': {'obstacle': False}}])
    rslt = run(model, cfg, OrderPolicy.parse('fixed:c1,sL,sR1,sR2'), inputs)
    for inst, phase, pre, post in stepsOf(model, cfg, rslt):
        if inst == 'c1' and phase == 'Act':
            break
    c = execContract(model.cls('Controller'), 'Act', model)
    assert post.get('c1', 'direction') == 'Right'
    assert holds(dict(c.disjuncts)['actRight'], cfg, post, pre, 'c1')
    post.set('c1', 'direction', 'Forward')
    assert not holds(c.formula, cfg, post, pre, 'c1')
    post.set('c1', 'direction', 'Right')
    post.set('sR1', 'processed', False)
    assert not holds(c.formula, cfg, post, pre, 'c1')

def test_tickContract():
    model = loadModel(corpus('blinker.sra'))
    cfg = loadConfiguration(corpus('blinker.sracfg'), model)
    c = tickContract(model.cls('Lamp'))
    pre = initState(model, cfg, InputProvider.random(0))
    for v in (0, 1, 2, 3):
        pre.set('lamp', 'hold', v)
        post = tick(model, cfg, pre.copy(), 'lamp')
        assert holds(c.formula, cfg, post, pre, 'lamp')
        post.set('lamp', 'hold', v)
        assert holds(c.formula, cfg, post, pre, 'lamp') == (v == 0)

def test_havocLeavesFieldFree():
    text = corpusText('blinker.sra').replace('blinks := blinks + 1;', 'blinks := *;')
    model = parseModel(text)
    cls = model.cls('Lamp')
    m = transformEffect(cls.transitions[0].effect, cls, model)
    assert isinstance(m.scalars['blinks'], Havoc) and m.scalars['blinks'].name == 'blinks'
    cfg = loadConfiguration(corpus('blinker.sracfg'), model)
    pre = initState(model, cfg, InputProvider.scripted([{'lamp': {'button': True}}]))
    post = execLocal(model, cfg, pre, 'lamp', 'Run')
    post.set('lamp', 'executed', True)
    c = execContract(cls, 'Run', model)
    for v in (0, 3, 7):
        post.set('lamp', 'blinks', v)
        assert holds(c.formula, cfg, post, pre, 'lamp')

def test_havocReadBackFromPostState():
    text = corpusText('blinker.sra').replace('blinks := blinks + 1;', 'blinks := *; hold := blinks;')
    model = parseModel(text)
    cls = model.cls('Lamp')
    m = transformEffect(cls.transitions[0].effect, cls, model)
    assert m.scalars['hold'] == TimerOn(m.scalars['blinks'])
    cfg = loadConfiguration(corpus('blinker.sracfg'), model)
    pre = initState(model, cfg, InputProvider.scripted([{'lamp': {'button': True}}]))
    post = execLocal(model, cfg, pre, 'lamp', 'Run')
    post.set('lamp', 'executed', True)
    c = execContract(cls, 'Run', model)
    for v in (3, 0, -2):
        post.set('lamp', 'blinks', v)
        post.set('lamp', 'hold', max(v, 0))
        assert holds(c.formula, cfg, post, pre, 'lamp')
        post.set('lamp', 'hold', max(v, 0) + 1)
        assert not holds(c.formula, cfg, post, pre, 'lamp')

def test_overwrittenHavocStaysFree():
    text = corpusText('blinker.sra').replace('blinks := blinks + 1;', 'blinks := *; hold := blinks; blinks := 0;')
    model = parseModel(text)
    cls = model.cls('Lamp')
    cfg = loadConfiguration(corpus('blinker.sracfg'), model)
    pre = initState(model, cfg, InputProvider.scripted([{'lamp': {'button': True}}]))
    post = execLocal(model, cfg, pre, 'lamp', 'Run')
    post.set('lamp', 'executed', True)
    c = execContract(cls, 'Run', model)
    for v in (0, 1, 5):
        post.set('lamp', 'hold', v)
        assert holds(c.formula, cfg, post, pre, 'lamp')
    post.set('lamp', 'blinks', 1)
    assert not holds(c.formula, cfg, post, pre, 'lamp')

def test_assumeHasNoContract():
    text = corpusText('blinker.sra').replace('Off, { }, Run)', 'Off, { assume blinks >= 0; }, Run)')
    model = parseModel(text)
    with pytest.raises(ContractError):
        execContract(model.cls('Lamp'), 'Run', model)
