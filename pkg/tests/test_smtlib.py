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

from Hugin.frontend import loadModel
from Hugin.smtlib import SmtWriter, parseStatus, parseCounterModel, parseSteps
from Hugin.diagnostics import EncodingError
from Hugin.expr import IntLit, BoolLit, EnumLit, AllSet, Card, Binary, Field, ObjConst, Old, SelfRef, Unary, TimerOn

@pytest.fixture(scope='module')
def robot():
    return loadModel(corpus('robot.sra'))

def test_preamble(robot):
    aLine = SmtWriter(robot).preamble()
    assert aLine[0] == '(set-option :produce-models true)'
    assert '(declare-sort Sensor 0)' in aLine
    assert '(declare-fun All.Controller (Controller) Bool)' in aLine
    assert '(assert (not (All.Sensor null.Sensor)))' in aLine
    assert '(declare-datatypes ((SensLoc 0)) (((SensLoc.Ready) (SensLoc.Go) (SensLoc.NoGo))))' in aLine
    assert '(declare-fun Sensor.location (Sensor) SensLoc)' in aLine
    assert '(declare-fun old.Sensor.location (Sensor) SensLoc)' in aLine
    assert '(declare-fun Sensor.executed (Sensor) Bool)' in aLine
    assert '(declare-fun Controller.leftSensors (Controller Sensor) Bool)' in aLine
    assert '(declare-const phase Phase)' in aLine
    assert '; Sides' in aLine
    assert '; Sides' not in SmtWriter(robot).preamble(withGamma=False)

def test_timerSort():
    model = loadModel(corpus('blinker.sra'))
    aLine = SmtWriter(model).preamble()
    assert '(declare-fun Lamp.hold (Lamp) Timer)' in aLine
    assert '(declare-fun Lamp.blinks (Lamp) Int)' in aLine

def test_timerStart():
    w = SmtWriter(loadModel(corpus('blinker.sra')))
    assert w.term(TimerOn(IntLit(2))) == '(Timer.active 2)'
    assert w.term(TimerOn(IntLit(0))) == 'Timer.inactive'
    assert w.term(TimerOn(IntLit(-1))) == 'Timer.inactive'
    k = Field(ObjConst('l', 'Lamp'), 'Lamp', 'blinks')
    assert w.term(TimerOn(k)) == '(ite (> (Lamp.blinks $l) 0) (Timer.active (Lamp.blinks $l)) Timer.inactive)'

def test_terms(robot):
    w = SmtWriter(robot)
    s = ObjConst('s', 'Sensor')
    f = Field(s, 'Sensor', 'location')
    assert w.term(f) == '(Sensor.location $s)'
    assert w.term(Old(f)) == '(old.Sensor.location $s)'
    assert w.term(Binary('==', f, EnumLit('SensLoc', 'Go'))) == '(= (Sensor.location $s) SensLoc.Go)'
    assert w.term(IntLit(-3)) == '(- 3)'
    assert w.term(Unary('!', BoolLit(True))) == '(not true)'
    assert w.term(f, syms={('Sensor', 'location'): 'mid.Sensor.location'}) == '(mid.Sensor.location $s)'
    assert w.term(f, syms={}) == '(old.Sensor.location $s)'
    with pytest.raises(EncodingError):
        w.term(Field(SelfRef('Sensor'), 'Sensor', 'location'))

def test_cardinality(robot):
    w = SmtWriter(robot, cardBound=2)
    assert w.term(Binary('>=', Card(AllSet('Sensor')), IntLit(0))) == 'true'
    t = w.term(Binary('>=', Card(AllSet('Sensor')), IntLit(2)))
    assert t.startswith('(exists (')
    assert '(distinct ' in t
    assert t.count('(All.Sensor ') == 2
    assert w.term(Binary('<', Card(AllSet('Sensor')), IntLit(0))) == 'false'
    assert w.term(Binary('<=', IntLit(1), Card(AllSet('Sensor')))).startswith('(exists (')
    with pytest.raises(EncodingError):
        w.term(Binary('>=', Card(AllSet('Sensor')), IntLit(3)))
    with pytest.raises(EncodingError):
        w.term(Binary('<=', Card(AllSet('Sensor')), IntLit(2)))
    with pytest.raises(EncodingError):
        w.term(Binary('+', Card(AllSet('Sensor')), IntLit(1)))

@given(n=st.integers(1, 4))
def test_cardinalityWithinBound(n):
    w = SmtWriter(loadModel(corpus('robot.sra')), cardBound=4)
    t = w.term(Binary('>=', Card(AllSet('Sensor')), IntLit(n)))
    assert t.count('(All.Sensor ') == n
    assert ('(distinct ' in t) == (n >= 2)

def test_query(robot):
    w = SmtWriter(robot)
    f = Binary('==', Field(ObjConst('c', 'Controller'), 'Controller', 'direction'), EnumLit('Direction', 'Stop'))
    txt = w.query(f)
    aLine = txt.splitlines()
    assert '(declare-const $c Controller)' in aLine
    assert aLine[-4] == '(assert (not (= (Controller.direction $c) Direction.Stop)))'
    assert aLine[-3:] == ['(check-sat)', '(get-model)', '(get-info :all-statistics)']
    assert txt.endswith('\n')

def test_parseStatus():
    assert parseStatus('unsat\n') == 'unsat'
    assert parseStatus('sat\n(model)\n') == 'sat'
    assert parseStatus('  unknown  \n') == 'unknown'
    assert parseStatus('(error "line 3: bad")\nunsat\n') == 'unsat'
    assert parseStatus('(error "line 3: bad")\n') == 'error'
    assert parseStatus('') == 'error'

def test_parseCounterModel():
    stdout = '\n'.join(['sat', '(',
        '  ;; universe for Sensor:',
        '  ;;   Sensor!val!0 Sensor!val!1',
        '  (define-fun $s () Sensor',
        '    Sensor!val!1)',
        '  (define-fun phase () Phase',
        '    Phase.Act)',
        ')'])
    m = parseCounterModel(stdout)
    assert m['universes'] == {'Sensor': ['Sensor!val!0', 'Sensor!val!1']}
    assert m['constants'] == {'s': 'Sensor!val!1', 'phase': 'Phase.Act'}

def test_parseSteps():
    assert parseSteps('unsat\n(:memory 2.1\n :rlimit-count 12345\n :time 0.01)') == 12345
    assert parseSteps('unsat\n') is None
