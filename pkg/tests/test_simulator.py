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

import io
import json

import pytest
import hypothesis.strategies as st
from hypothesis import given, settings
from .common import corpus

from Hugin.frontend import loadModel, loadConfiguration, loadLabeled, parseConfiguration
from Hugin.simulator import (InputProvider, OrderPolicy, run, evaluate, initState, execLocal, stepScheduler,
        traceToJson, writeTrace)
from Hugin.diagnostics import SimulationError, SchedulerError

@pytest.fixture(scope='module')
def robot():
    model = loadModel(corpus('robot.sra'))
    cfg = loadConfiguration(corpus('robot.sracfg'), model)
    return model, cfg

def scenario():
    with open(corpus('scenario.json'), 'r', encoding='utf-8') as fp:
        return InputProvider.fromJson(json.load(fp))

def monitors(model):
    return [(c.label, c.expr) for c in loadLabeled(corpus('prop.srainv'), model)]

def test_initialState(robot):
    model, cfg = robot
    s = initState(model, cfg, scenario())
    assert s.phase == 'Sense'
    assert s.get('sL', 'location') == 'Ready'
    assert s.get('sL', 'obstacle') is True
    assert s.get('c1', 'direction') == 'Stop'
    assert not any(s.get(i, 'executed') for i in cfg.instances())

def test_scenarioTurnsRight(robot):
    model, cfg = robot
    rslt = run(model, cfg, OrderPolicy.parse('fixed:c1,sL,sR1,sR2'), scenario(), cycles=1, monitors=monitors(model))
    assert rslt.passed
    s = rslt.final
    assert s.phase == 'End'
    assert s.get('c1', 'direction') == 'Right'
    assert s.get('c1', 'location') == 'Idle'
    assert all(s.get(x, 'location') == 'Ready' for x in ('sL', 'sR1', 'sR2'))
    aPhase = [x.phase for x in rslt.trace if x.label['kind'] == 'self-loop']
    assert aPhase == ['Sense', 'Act', 'Reset']

def test_reversedOrderNeedsSecondSweep(robot):
    model, cfg = robot
    rslt = run(model, cfg, OrderPolicy.parse('fixed:sL,sR1,sR2,c1'), scenario(), cycles=1, monitors=monitors(model))
    assert rslt.passed
    assert rslt.final.get('c1', 'direction') == 'Right'
    aPhase = [x.phase for x in rslt.trace if x.label['kind'] == 'self-loop']
    assert aPhase == ['Sense', 'Act', 'Act', 'Reset']

def test_perPhaseOrder(robot):
    model, cfg = robot
    order = OrderPolicy.parse('fixed:Act=c1,sL,sR1,sR2;Sense=sL,sR1,sR2,c1')
    assert order.order(cfg, 'Act') == ['c1', 'sL', 'sR1', 'sR2']
    assert order.order(cfg, 'Reset') == list(cfg.instances())
    with pytest.raises(SimulationError):
        OrderPolicy.fixedOrder(['c1']).order(cfg, 'Act')

@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_propertyUnderRandomRuns(seed):
    model = loadModel(corpus('robot.sra'))
    cfg = loadConfiguration(corpus('robot.sracfg'), model)
    aInv = [(c.label, c.expr) for c in loadLabeled(corpus('robot.srainv'), model)]
    rslt = run(model, cfg, OrderPolicy.seeded(seed), InputProvider.random(seed), cycles=3, monitors=monitors(model) + aInv)
    assert rslt.passed
    assert sum(1 for x in rslt.trace if x.label['kind'] == 'reset') == 2

def test_weakenedGuardViolates():
    model = loadModel(corpus('robot-weak.sra'))
    cfg = loadConfiguration(corpus('robot.sracfg'), model)
    inputs = InputProvider.scripted([{'sL': {'obstacle': True}, 'sR1': {'obstacle': True}, 'sR2': {'obstacle': False}}])
    rslt = run(model, cfg, OrderPolicy.seeded(0), inputs, cycles=1, monitors=monitors(model))
    assert not rslt.passed
    assert rslt.violation == 'Prop'
    assert rslt.final.get('c1', 'direction') == 'Left'

def test_execLocalLeavesPreState(robot):
    model, cfg = robot
    s = initState(model, cfg, scenario())
    post = execLocal(model, cfg, s, 'sL', 'Sense')
    assert post.get('sL', 'location') == 'NoGo'
    assert s.get('sL', 'location') == 'Ready'
    assert execLocal(model, cfg, s, 'c1', 'Sense') == s

def test_deadlock(robot):
    model, cfg = robot
    s = initState(model, cfg, scenario())
    s.set('sL', 'executed', True)
    with pytest.raises(SchedulerError):
        stepScheduler(model, cfg, s, OrderPolicy.seeded(0), scenario())

def test_livelock():
    model = loadModel(corpus('robot.sra'))
    cfg = parseConfiguration("", model)
    with pytest.raises(SchedulerError) as ei:
        run(model, cfg, OrderPolicy.seeded(0), InputProvider.random(0), cycles=1, maxSteps=50)
    assert len(ei.value.trace) == 1 + 50

def test_failedRunKeepsTrace(robot):
    model, cfg = robot
    with pytest.raises(SimulationError) as ei:
        run(model, cfg, OrderPolicy.parse('fixed:Act=c1'), scenario())
    assert [x.label['kind'] for x in ei.value.trace] == ['init', 'self-loop', 'phase-change']
    assert ei.value.trace[-1].phase == 'Act'

def test_unknownScriptedInput(robot):
    model, cfg = robot
    with pytest.raises(SimulationError):
        run(model, cfg, OrderPolicy.seeded(0), InputProvider.scripted([{'sL': {'location': 'Go'}}]))

def test_timerCountsCycles():
    model = loadModel(corpus('blinker.sra'))
    cfg = loadConfiguration(corpus('blinker.sracfg'), model)
    inputs = InputProvider.scripted([{'lamp': {'button': True}}] + [{'lamp': {'button': False}}] * 3)
    rslt = run(model, cfg, OrderPolicy.seeded(0), inputs, cycles=4)
    aFinal = [x.state for x in rslt.trace if x.phase == 'Done' and x.label['kind'] == 'phase-change']
    assert [s.get('lamp', 'location') for s in aFinal] == ['On', 'On', 'Off', 'Off']
    assert [s.get('lamp', 'hold') for s in aFinal] == [1, 0, 0, 0]
    assert aFinal[-1].get('lamp', 'blinks') == 1

def test_traceJson(robot):
    model, cfg = robot
    rslt = run(model, cfg, OrderPolicy.parse('fixed:c1,sL,sR1,sR2'), scenario())
    fpw = io.StringIO()
    writeTrace(model, cfg, rslt.trace, fpw)
    aLine = [json.loads(x) for x in fpw.getvalue().splitlines()]
    assert aLine[0]['label'] == {'kind': 'init'}
    assert aLine[0]['state']['c1']['direction'] == 'Stop'
    assert aLine[-1]['phase'] == 'End'
    assert [x['step'] for x in aLine] == list(range(len(aLine)))
    assert list(traceToJson(model, cfg, rslt.trace))[-1] == aLine[-1]

def test_blinkerTimerJson():
    model = loadModel(corpus('blinker.sra'))
    cfg = loadConfiguration(corpus('blinker.sracfg'), model)
    rslt = run(model, cfg, OrderPolicy.seeded(0), InputProvider.scripted([{'lamp': {'button': True}}]))
    aState = [x['state']['lamp']['hold'] for x in traceToJson(model, cfg, rslt.trace)]
    assert aState[0] == 'inactive'
    assert 2 in aState
