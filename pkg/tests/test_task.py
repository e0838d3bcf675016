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

import os
import time
from pathlib import Path

from .common import TestFieldForFile

from Hugin.task import EmitVcTask, DischargeTask
from Hugin.run import run, discharge, dischargeTasks
from Hugin.vcgen import VerificationTask, VcResult, VALID, INVALID, UNKNOWN, TIMEOUT

# Put all luigi imports after Hugin to suppress annoying warnings
import luigi as lg

def mkTasks(n=2):
    return [VerificationTask('t{}'.format(i), 'local', None, '(check-sat)\n; {}\n'.format(i)) for i in range(n)]

def test_emitWritesScript():
    with TestFieldForFile() as _:
        t = EmitVcTask(out='a.smt2', text='(check-sat)\n')
        assert not t.complete()
        run(t)
        assert Path('a.smt2').read_text() == '(check-sat)\n'
        assert t.complete()

def test_emitKeepsUnchangedScript():
    with TestFieldForFile() as _:
        run(EmitVcTask(out='a.smt2', text='(check-sat)\n'))
        mtime = os.path.getmtime('a.smt2')
        time.sleep(0.01)
        run(EmitVcTask(out='a.smt2', text='(check-sat)\n'))
        assert os.path.getmtime('a.smt2') == mtime
        run(EmitVcTask(out='a.smt2', text='(check-sat)\n(exit)\n'))
        assert Path('a.smt2').read_text() == '(check-sat)\n(exit)\n'

def test_dischargeVerdicts():
    with TestFieldForFile() as _:
        aRslt = discharge(mkTasks(), 'out', 'echo unsat', 10)
        assert [r.taskId for r in aRslt] == ['t0', 't1']
        assert all(r.verdict == VALID for r in aRslt)
        assert Path('out/t0.smt2').exists()

        aRslt = discharge(mkTasks(1), 'out', 'echo sat', 10)
        assert aRslt[0].verdict == INVALID
        assert aRslt[0].model == {'universes': {}, 'constants': {}}

        aRslt = discharge(mkTasks(1), 'out', 'echo oops', 10)
        assert aRslt[0].verdict == UNKNOWN
        assert aRslt[0].stderr == 'oops'

def test_dischargeCache():
    with TestFieldForFile() as _:
        discharge(mkTasks(1), 'out', 'echo unsat', 10)
        mtime = os.path.getmtime('out/t0.json')
        time.sleep(0.01)
        discharge(mkTasks(1), 'out', 'echo unsat', 10)
        assert os.path.getmtime('out/t0.json') == mtime

        # A changed script invalidates the cached verdict
        aTask = [VerificationTask('t0', 'local', None, '(check-sat)\n(exit)\n')]
        time.sleep(0.01)
        discharge(aTask, 'out', 'echo unsat', 10)
        assert os.path.getmtime('out/t0.json') != mtime

def test_changedScriptMakesNewTask():
    t1, = dischargeTasks(mkTasks(1), 'out', 'echo unsat', 10)
    t2, = dischargeTasks([VerificationTask('t0', 'local', None, '(check-sat)\n(exit)\n')], 'out', 'echo unsat', 10)
    assert t2 is not t1
    assert t2.src.text == '(check-sat)\n(exit)\n'
    assert repr(t2) == repr(t1)

def test_dischargeTimeout():
    with TestFieldForFile() as _:
        aRslt = discharge(mkTasks(1), 'out', 'sleep 5', 0.5)
        assert aRslt[0].verdict == TIMEOUT
        assert VcResult.load('out/t0.json').timeout == 0.5

def test_dischargeMissingCommand():
    with TestFieldForFile() as _:
        t, = dischargeTasks(mkTasks(1), 'out', 'no-such-solver-hugin', 10)
        lg.build([t], local_scheduler=True, log_level='WARNING', workers=1)
        rslt = VcResult.load(t.output().path)
        assert rslt.verdict == UNKNOWN
        assert 'not found' in rslt.stderr

def test_dischargeTaskRepr():
    t, = dischargeTasks(mkTasks(1), 'out', 'echo unsat', 10)
    assert isinstance(t, DischargeTask)
    assert repr(t) == 'DischargeTask(src={}, out={}, taskId=t0)'.format(Path('out/t0.smt2'), Path('out/t0.json'))
