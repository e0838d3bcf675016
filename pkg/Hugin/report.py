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
from dataclasses import dataclass, field

from .logging import good, bad, meh
from .vcgen import VALID, INVALID

PROVEN = 'Proven'
REFUTED = 'Refuted-obligation'
INCONCLUSIVE = 'Inconclusive'

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_ERROR = 2
EXIT_INCONCLUSIVE = 3

@dataclass
class Report:
    verdict: str
    results: list
    kinds: dict = field(default_factory=dict)
    labels: tuple = ()

    @property
    def failing(self):
        return [r for r in self.results if r.verdict != VALID]

    @property
    def totalTime(self):
        return sum(r.wallTime for r in self.results)

    @property
    def totalSteps(self):
        aSteps = [r.steps for r in self.results if r.steps is not None]
        return sum(aSteps) if aSteps else None

    @property
    def exitCode(self):
        return {PROVEN: EXIT_OK, REFUTED: EXIT_VIOLATION}.get(self.verdict, EXIT_INCONCLUSIVE)

    def toJson(self):
        return {
            'verdict': self.verdict,
            'labels': list(self.labels),
            'tasks': [dict(r.toJson(), kind=self.kinds.get(r.taskId)) for r in self.results],
            'failing': [r.taskId for r in self.failing],
            'totalTime': self.totalTime,
            'totalSteps': self.totalSteps,
            }

    def toText(self):
        aLine = []
        if self.labels:
            aLine.append("Invariant conjuncts: {}".format(', '.join(self.labels)))
        for r in self.results:
            aLine.append("  {:<9} {:<48} {:8.3f}s{}".format(_paintVerdict(r.verdict), r.taskId, r.wallTime,
                '' if r.steps is None else '  {} steps'.format(r.steps)))
        for r in self.failing:
            aLine.append("{} {}".format(_paintVerdict(r.verdict), r.taskId))
            if r.model:
                for cls, aElem in sorted(r.model.get('universes', {}).items()):
                    aLine.append("    universe {}: {}".format(cls, ' '.join(aElem)))
                for name, val in sorted(r.model.get('constants', {}).items()):
                    aLine.append("    {} = {}".format(name, val))
            if r.stderr:
                aLine.append("    {}".format(r.stderr.splitlines()[0]))
        steps = '' if self.totalSteps is None else ', {} solver steps'.format(self.totalSteps)
        aLine.append("Total: {} tasks, {:.3f}s{}".format(len(self.results), self.totalTime, steps))
        aLine.append("Verdict: {}".format(_paintVerdict(self.verdict)))
        if self.verdict == REFUTED:
            aLine.append("An invalid obligation may also mean the invariant is not inductive, not that the system is unsafe.")
        return '\n'.join(aLine)

def _paintVerdict(v):
    if v in (VALID, PROVEN):
        return good(v)
    if v in (INVALID, REFUTED):
        return bad(v)
    return meh(v)

def overallVerdict(results):
    if all(r.verdict == VALID for r in results):
        return PROVEN
    if any(r.verdict == INVALID for r in results):
        return REFUTED
    return INCONCLUSIVE

def report(results, aTask=(), labels=()):
    kinds = {t.id: t.kind for t in aTask}
    return Report(overallVerdict(results), list(results), kinds, tuple(labels))

def writeReport(rpt, path):
    with open(path, 'w', encoding='utf-8') as fpw:
        json.dump(rpt.toJson(), fpw, indent=2, sort_keys=True)
        fpw.write('\n')
