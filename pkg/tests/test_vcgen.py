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

import json
from collections import Counter

import pytest
from .common import corpus, needsZ3

from Hugin.frontend import loadModel, loadInvariant, loadGprime
from Hugin.cmd import cmdfmt, solverCommand
from Hugin.smtlib import parseStatus
from Hugin.vcgen import (buildChecks, buildLocalContractTask, buildLocalContractTasks, VcResult,
        VALID, INVALID, ESTABLISHMENT, STABILITY, SELFLOOP, INIT, PHASE_NONFINAL, PHASE_FINAL, RESET, PROPERTY, LOCAL)

def checks(name='robot.sra', **kwargs):
    model = loadModel(corpus(name))
    inv = loadInvariant(corpus('robot.srainv'), model)
    prop = loadInvariant(corpus('prop.srainv'), model)
    gprime = loadGprime(corpus('robot.gprime'), model)
    return buildChecks(model, inv, prop, gprime, **kwargs)

def solve(task):
    _, stdout, _ = (cmdfmt(solverCommand()) << task.smt).run(retcode=None, timeout=120)
    return parseStatus(stdout)

def test_taskKinds():
    aTask = checks()
    cnt = Counter(t.kind for t in aTask)
    assert cnt[ESTABLISHMENT] == 3 * 2
    assert cnt[STABILITY] == 3 * 4
    assert cnt[SELFLOOP] == 3 * 2
    assert cnt[INIT] == 1
    assert cnt[PHASE_NONFINAL] == 2
    assert cnt[PHASE_FINAL] == 1
    assert cnt[RESET] == 1
    assert cnt[PROPERTY] == 1
    assert len(aTask) == 30

def test_taskIds():
    dictTask = {t.id: t for t in checks()}
    assert len(dictTask) == 30
    for tid in ('establishment_Sensor_Act', 'stability_Controller.Sensor_Act', 'selfloop_Controller_Reset',
            'init_all_Sense', 'phase_nonfinal_all_Sense-Act', 'phase_final_all_Reset-End', 'reset_all_End-Sense',
            'property_all_End'):
        assert tid in dictTask
    assert dictTask['phase_final_all_Reset-End'].edge == ('Reset', 'End')
    assert dictTask['selfloop_Controller_Reset'].cls == 'Controller'
    assert 'establishment_Sensor_End' not in dictTask

def test_propertyPhase():
    aTask = checks(propertyPhase='Reset')
    assert [t.id for t in aTask if t.kind == PROPERTY] == ['property_all_Reset']

def test_scripts():
    for t in checks():
        aLine = t.smt.splitlines()
        assert aLine[0] == '(set-option :produce-models true)'
        assert aLine[-3] == '(check-sat)'
        assert aLine[-4].startswith('(assert (not ')
        assert '$c' in t.smt or t.kind != SELFLOOP
    dictTask = {t.id: t for t in checks()}
    # Sense uses the default !executed, Act is `true` in robot.gprime
    assert '(declare-const $c Sensor)' in dictTask['establishment_Sensor_Sense'].smt
    assert dictTask['establishment_Sensor_Act'].smt.splitlines()[-4] == '(assert (not true))'

def test_localTasks():
    model = loadModel(corpus('robot.sra'))
    aTask = buildLocalContractTasks(model)
    assert [t.id for t in aTask][:6] == ['local_Sensor_init', 'local_Sensor_Sense', 'local_Sensor_Act',
        'local_Sensor_Reset', 'local_Sensor_End', 'local_Sensor_tick']
    assert all(t.kind == LOCAL for t in aTask)
    assert len(aTask) == 2 * 6

def test_vcResultJson(tmp_path):
    rslt = VcResult('t0', INVALID, 0.5, 'z3 -in', {'universes': {}, 'constants': {'c': 'x'}}, 42, '', 60.0)
    p = tmp_path / 't0.json'
    p.write_text(json.dumps(rslt.toJson()))
    assert VcResult.load(str(p)) == rslt
    assert rslt.toJson()['verdict'] == 'Invalid'

@needsZ3
def test_robotGlobalChecksHold():
    aFail = [t.id for t in checks() if solve(t) != 'unsat']
    assert aFail == []

@needsZ3
def test_weakenedGuardBreaksSelfLoop():
    dictStatus = {t.id: solve(t) for t in checks('robot-weak.sra') if t.kind == SELFLOOP}
    assert dictStatus['selfloop_Controller_Act'] == 'sat'
    assert dictStatus['selfloop_Sensor_Act'] == 'unsat'

@needsZ3
def test_robotLocalContractsHold():
    model = loadModel(corpus('robot.sra'))
    aFail = [t.id for t in buildLocalContractTasks(model) if solve(t) != 'unsat']
    assert aFail == []

@needsZ3
def test_wrongContractIsCaught():
    from Hugin.contractgen import initContract
    model = loadModel(corpus('robot.sra'))
    cls = model.cls('Controller')
    t = buildLocalContractTask(model, cls, 'Act', contract=initContract(cls))
    assert t.id == 'local_Controller_Act'
    assert solve(t) == 'sat'
