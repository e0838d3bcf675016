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
from hypothesis import given
from .common import corpus

from Hugin.frontend import (loadModel, loadConfiguration, loadLabeled, loadGprime,
        parseModel, parseConfiguration, parseInvariant, parseLabeled, parseGprime)
from Hugin.diagnostics import FrontendError
from Hugin.expr import TRUE, Quant, Field, Binary, TimerActive, TEnum, TSet
from Hugin import diagnostics as dg

@pytest.fixture(scope='module')
def robot():
    return loadModel(corpus('robot.sra'))

def test_robotModel(robot):
    assert robot.classNames == ['Sensor', 'Controller']
    assert robot.scheduler.phases == ('Sense', 'Act', 'Reset', 'End')
    assert robot.scheduler.initial == 'Sense'
    assert robot.scheduler.final == 'End'
    ctrl = robot.cls('Controller')
    assert [t.name for t in ctrl.transitions] == ['actRight', 'actLeft', 'actForward', 'actStop', 'reset']
    assert [t.index for t in ctrl.phaseTransitions('Act')] == [0, 1, 2, 3]
    assert ctrl.field('direction').ty == TEnum('Direction')
    assert ctrl.field('allSensors').ty == TSet('Sensor')
    assert robot.cls('Sensor').field('obstacle').kind == 'input'
    assert [c.label for c in robot.constraints] == ['Sides', 'Owners', 'HasLeft', 'HasRight', 'Covered']

def test_quantifierOverAllExpandsPerClass(robot):
    g = robot.scheduler.transitions[0].guard
    assert isinstance(g, Binary) and g.op == '&&'
    assert {q.cls for q in (g.a, g.b)} == {'Sensor', 'Controller'}

def test_robotConfiguration(robot):
    cfg = loadConfiguration(corpus('robot.sracfg'), robot)
    assert cfg.universes == {'Sensor': ['sL', 'sR1', 'sR2'], 'Controller': ['c1']}
    assert cfg.setOf('c1', 'rightSensors') == frozenset({'sR1', 'sR2'})
    assert cfg.gammaHolds()

def test_configurationViolatingConstraints(robot):
    cfg = parseConfiguration("Controller c1;\nSensor a;\nc1.leftSensors = { a };\nc1.allSensors = { a };\n", robot)
    assert dict(cfg.gamma)['HasRight'] is False
    assert not cfg.gammaHolds()

@given(n=st.integers(min_value=1, max_value=8))
def test_configurationSizes(n):
    robot = loadModel(corpus('robot.sra'))
    aRight = ['r{}'.format(i) for i in range(n)]
    txt = "Controller c;\nSensor l, {};\nc.leftSensors = {{ l }};\nc.rightSensors = {{ {} }};\nc.allSensors = {{ l, {} }};\n".format(
        ', '.join(aRight), ', '.join(aRight), ', '.join(aRight))
    cfg = parseConfiguration(txt, robot)
    assert cfg.size == n + 2
    assert cfg.gammaHolds()

@pytest.mark.parametrize('txt', [
    "Robot r;\n",
    "Sensor a;\nSensor a;\n",
    "Controller c;\nc.leftSensors = { c };\n",
    "Controller c;\nc.direction = Left;\n",
    "Controller c;\nd.leftSensors = { };\n",
    ])
def test_configurationErrors(robot, txt):
    with pytest.raises(FrontendError) as e:
        parseConfiguration(txt, robot)
    assert dg.CONFIG in e.value.codes

def test_invariantLabels(robot):
    aInv = loadLabeled(corpus('robot.srainv'), robot)
    assert [c.label for c in aInv] == ['C1', 'E1', 'R1', 'L1', 'L2', 'L3', 'D1']
    assert all(isinstance(c.expr, Quant) for c in aInv)

def test_invariantRejectsOld(robot):
    with pytest.raises(FrontendError) as e:
        parseInvariant("X: forall c in All<Controller> : old(c.direction) == Left;", robot)
    assert e.value.codes == [dg.OLD_IN_SOURCE]

def test_unlabelledInvariantsAreNumbered(robot):
    aInv = parseLabeled("phase == Sense ==> true;\nA: true;\nphase != End;\n", robot)
    assert [c.label for c in aInv] == ['c1', 'A', 'c3']

def test_gprime(robot):
    gp = loadGprime(corpus('robot.gprime'), robot)
    assert gp == {('Act', 'Sensor'): TRUE, ('Act', 'Controller'): TRUE}
    gp = parseGprime("Sense Controller: !executed;", robot)
    assert list(gp) == [('Sense', 'Controller')]
    assert isinstance(gp[('Sense', 'Controller')].e, Field)

@pytest.mark.parametrize('txt, code', [
    ("Act: old(executed);", dg.GPRIME_POST),
    ("Nowhere: true;", dg.UNKNOWN_NAME),
    ("Act Robot: true;", dg.UNKNOWN_NAME),
    ])
def test_gprimeErrors(robot, txt, code):
    with pytest.raises(FrontendError) as e:
        parseGprime(txt, robot)
    assert code in e.value.codes

def test_timers():
    model = loadModel(corpus('blinker.sra'))
    lamp = model.cls('Lamp')
    assert lamp.field('hold').kind == 'timer'
    guard = lamp.transitions[1].guard
    assert isinstance(guard.e, TimerActive)

def test_diagnosticPosition():
    with pytest.raises(FrontendError) as e:
        parseModel("enum L { A }\nclass K {\n  var location : L = A;\n  transition go = (A, nope, A, { }, P);\n}\n"
            "scheduler { phases P, Q; initial P; final Q; trans P -> Q when true; }\n", 'k.sra')
    d, = e.value.diagnostics
    assert d.code == dg.UNKNOWN_NAME
    assert (d.span.file, d.span.line) == ('k.sra', 4)
    assert d.toJson()['line'] == 4
    assert str(d).startswith('k.sra:4:')

def test_allErrorsReported():
    with pytest.raises(FrontendError) as e:
        parseModel("enum L { A }\nclass K {\n  var location : L = A;\n  var n : Int = 0;\n"
            "  transition go = (A, nope, B, { n := true; }, P);\n}\n"
            "scheduler { phases P, Q; initial P; final Q; trans P -> Q when true; }\n")
    assert sorted(e.value.codes) == [dg.UNKNOWN_NAME, dg.TYPE_ERROR, dg.BAD_LOCATION]

def test_loadFromFakeFs(fs):
    fs.create_file('models/lamp.sra', contents="enum L { Off, On }\nclass Lamp {\n  var location : L = Off;\n  var executed : Bool;\n"
        "  input button : Bool;\n  transition on = (Off, button, On, { }, Run);\n}\n"
        "scheduler {\n  phases Run, Done;\n  initial Run;\n  final Done;\n"
        "  trans Run -> Run when forall x in All : !x.executed;\n  trans Run -> Done when forall x in All : x.executed;\n}\n")
    fs.create_file('models/lamp.sracfg', contents="Lamp a, b;\n")
    fs.create_file('models/bad.sracfg', contents="Lamp a;\nLamp a;\n")
    model = loadModel('models/lamp.sra')
    assert model.classNames == ['Lamp']
    cfg = loadConfiguration('models/lamp.sracfg', model)
    assert cfg.universes['Lamp'] == ['a', 'b']
    with pytest.raises(FrontendError) as e:
        loadConfiguration('models/bad.sracfg', model)
    assert e.value.diagnostics[0].span.file == 'models/bad.sracfg'
    assert e.value.diagnostics[0].span.line == 2
