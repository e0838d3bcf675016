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

import hypothesis.strategies as st
from hypothesis import given

from Hugin.vcgen import VcResult, VerificationTask, VALID, INVALID, UNKNOWN, TIMEOUT
from Hugin.report import report, overallVerdict, writeReport, PROVEN, REFUTED, INCONCLUSIVE
from Hugin.logging import good, bad

def results(*aVerdict):
    return [VcResult('t{}'.format(i), v, 0.25, steps=10) for i, v in enumerate(aVerdict)]

def test_verdicts():
    assert overallVerdict(results(VALID, VALID)) == PROVEN
    assert overallVerdict(results()) == PROVEN
    assert overallVerdict(results(VALID, UNKNOWN, INVALID)) == REFUTED
    assert overallVerdict(results(VALID, TIMEOUT)) == INCONCLUSIVE
    assert overallVerdict(results(UNKNOWN)) == INCONCLUSIVE

@given(st.lists(st.sampled_from([VALID, INVALID, UNKNOWN, TIMEOUT])))
def test_exitCodes(aVerdict):
    rpt = report(results(*aVerdict))
    if INVALID in aVerdict:
        assert rpt.exitCode == 1
    elif all(v == VALID for v in aVerdict):
        assert rpt.exitCode == 0
    else:
        assert rpt.exitCode == 3
    assert len(rpt.failing) == sum(1 for v in aVerdict if v != VALID)

def test_totals():
    rpt = report(results(VALID, VALID, VALID))
    assert rpt.totalTime == 0.75
    assert rpt.totalSteps == 30
    assert report([VcResult('t0', VALID, 1.0)]).totalSteps is None

def test_json(tmp_path):
    aTask = [VerificationTask('t0', 'init', None), VerificationTask('t1', 'property', None)]
    aResult = results(VALID, INVALID)
    aResult[1].model = {'universes': {'Sensor': ['Sensor!val!0']}, 'constants': {'c': 'Controller!val!0'}}
    rpt = report(aResult, aTask, ['C1', 'E1'])
    obj = rpt.toJson()
    assert obj['verdict'] == REFUTED
    assert obj['labels'] == ['C1', 'E1']
    assert obj['failing'] == ['t1']
    assert [t['kind'] for t in obj['tasks']] == ['init', 'property']
    p = tmp_path / 'report.json'
    writeReport(rpt, str(p))
    assert json.loads(p.read_text()) == obj

def test_text():
    aResult = results(VALID, INVALID)
    aResult[1].model = {'universes': {'Sensor': ['Sensor!val!0']}, 'constants': {'c': 'Controller!val!0'}}
    txt = report(aResult, labels=['C1']).toText()
    assert txt.splitlines()[0] == 'Invariant conjuncts: C1'
    assert '    universe Sensor: Sensor!val!0' in txt
    assert '    c = Controller!val!0' in txt
    assert 'Total: 2 tasks, 0.500s, 20 solver steps' in txt
    assert 'Verdict: {}'.format(bad(REFUTED)) in txt
    assert 'Verdict: {}'.format(good(PROVEN)) in report(results(VALID)).toText()

def test_writeReportFakeFs(fs):
    fs.create_dir('hugin-out/global')
    rpt = report(results(VALID, TIMEOUT))
    writeReport(rpt, 'hugin-out/global/report.json')
    with open('hugin-out/global/report.json', 'r', encoding='utf-8') as fp:
        txt = fp.read()
    assert txt.endswith('}\n')
    obj = json.loads(txt)
    assert obj['verdict'] == INCONCLUSIVE
    assert obj['failing'] == ['t1']
    assert list(obj) == sorted(obj)
