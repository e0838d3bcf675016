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
from .common import corpus, corpusText, needsZ3

from Hugin.frontend import loadModel, loadConfiguration, loadLabeled, parseModel, parseInvariant
from Hugin.grounding import (plan, groundFormula, groundStatements, groundConfiguration, linking, defaultSpecs,
        equivalenceLemmas, GroundEntry)
from Hugin.simulator import InputProvider, OrderPolicy, run, evaluate
from Hugin.pretty import printModel
from Hugin.cmd import cmdfmt, solverCommand
from Hugin.smtlib import parseStatus
from Hugin.diagnostics import GroundingError
from Hugin.expr import Quant, Field, walk

@pytest.fixture(scope='module')
def single():
    return loadModel(corpus('robot-single.sra'))

def variant(bound):
    return parseModel(corpusText('robot-single.sra').replace('|c.leftSensors| == 1', '|c.leftSensors| {}'.format(bound)))

def test_plan(single):
    p = plan(single)
    assert list(p) == [GroundEntry('Controller', 'leftSensors', 'leftSensor', False, 'Sensor')]
    assert repr(p) == 'GroundingPlan(Controller.leftSensors -> leftSensor)'
    assert plan(single, fields=[('Controller', 'leftSensors')]).get('Controller', 'leftSensors').name == 'leftSensor'

def test_planNullable():
    p = plan(variant('<= 1'))
    assert p.get('Controller', 'leftSensors').nullable
    assert repr(p) == 'GroundingPlan(Controller.leftSensors -> leftSensor?)'
    assert plan(variant('< 2')).get('Controller', 'leftSensors').nullable

def test_planRejects():
    model = variant('<= 2')
    assert not plan(model)
    with pytest.raises(GroundingError):
        plan(model, fields=[('Controller', 'leftSensors')])
    with pytest.raises(GroundingError):
        plan(loadModel(corpus('robot.sra')), fields=[('Controller', 'leftSensors')])

def test_groundGuard(single):
    p = plan(single)
    t = single.cls('Controller').transitions[0]
    g = groundFormula(t.guard, p)
    assert not any(isinstance(x, Quant) and isinstance(x.rng, Field) and x.rng.name == 'leftSensors' for x in walk(g))
    assert any(isinstance(x, Field) and x.name == 'leftSensor' for x in walk(g))
    assert any(isinstance(x, Quant) and isinstance(x.rng, Field) and x.rng.name == 'rightSensors' for x in walk(g))

def test_groundCardinality(single):
    p = plan(single)
    e = parseInvariant('forall c in All<Controller> : |c.leftSensors| == 1 && (forall s in c.leftSensors : s in c.allSensors);', single)
    g = groundFormula(e, p)
    assert not any(isinstance(x, Quant) and isinstance(x.rng, Field) for x in walk(g))

def test_groundedModel(single):
    grounded = groundStatements(single, plan(single))
    fd = grounded.cls('Controller').field('leftSensor')
    assert fd.kind == 'ground' and fd.source == 'leftSensors' and not fd.nullable
    assert grounded.cls('Controller').field('leftSensors').kind == 'set'
    txt = printModel(grounded)
    assert 'ground leftSensor : Sensor from leftSensors;' in txt
    assert printModel(parseModel(txt)) == txt
    assert groundStatements(single, plan(loadModel(corpus('robot.sra')))) is single

def test_groundedRunMatches(single):
    cfg = loadConfiguration(corpus('robot.sracfg'), single)
    grounded = groundStatements(single, plan(single))
    cfgGround = groundConfiguration(cfg, grounded)
    assert cfgGround.params[('c1', 'leftSensor')] == 'sL'
    assert evaluate(linking(plan(single)), cfgGround, None)
    for seed in range(5):
        a = run(single, cfg, OrderPolicy.seeded(seed), InputProvider.random(seed), cycles=3)
        b = run(grounded, cfgGround, OrderPolicy.seeded(seed), InputProvider.random(seed), cycles=3)
        assert [x.state for x in a.trace] == [x.state for x in b.trace]

def test_lemmaIds(single):
    p = plan(single)
    aSpec = defaultSpecs(single)
    assert aSpec[0][0] == 'init_Sensor_all'
    aTask = equivalenceLemmas(single, p, aSpec)
    assert len(aTask) == len(aSpec)
    assert aTask[0].id == 'lemma_init_Sensor_all'
    assert all(t.kind == 'lemma' for t in aTask)

def test_lemmaAssumesSelfInUniverse(single):
    dictTask = {t.id: t for t in equivalenceLemmas(single, plan(single), defaultSpecs(single))}
    t = dictTask['lemma_exec_Controller_Act']
    assert '(declare-const $c Controller)' in t.smt
    assert '(All.Controller $c)' in t.smt.splitlines()[-4]
    assert '$c' not in dictTask['lemma_guard_Act-Reset_3'].smt

@needsZ3
def test_lemmasHold(single):
    aFail = []
    for t in equivalenceLemmas(single, plan(single), defaultSpecs(single)):
        _, stdout, _ = (cmdfmt(solverCommand()) << t.smt).run(retcode=None, timeout=120)
        if parseStatus(stdout) != 'unsat':
            aFail.append(t.id)
    assert aFail == []

@needsZ3
def test_lemmasHoldWithInvariant(single):
    aInv = loadLabeled(corpus('robot.srainv'), single)
    aProp = loadLabeled(corpus('prop.srainv'), single)
    aSpec = [x for x in defaultSpecs(single, aInv, aProp) if x[0].startswith(('inv_', 'prop_'))]
    assert [x[0] for x in aSpec] == ['inv_C1', 'inv_E1', 'inv_R1', 'inv_L1', 'inv_L2', 'inv_L3', 'inv_D1', 'prop_Prop']
    aFail = []
    for t in equivalenceLemmas(single, plan(single), aSpec):
        _, stdout, _ = (cmdfmt(solverCommand()) << t.smt).run(retcode=None, timeout=120)
        if parseStatus(stdout) != 'unsat':
            aFail.append(t.id)
    assert aFail == []
