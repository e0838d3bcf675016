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

import time

import luigi as lg
from luigi.task import flatten
from colorama import Fore, Style
from plumbum.commands.processes import ProcessTimedOut, CommandNotFound

from .cmd import cmdfmt
from .target import Target
from .logging import logger
from .param import PathParameter, TextParameter, TaskParameter
from .smtlib import parseStatus, parseCounterModel, parseSteps
from .vcgen import VcResult, VALID, INVALID, UNKNOWN, TIMEOUT

def getAllInputTargets(aTask):
    if len(aTask) == 0: return set()
    setRslt = set()
    for t in aTask:
        setRslt |= set(flatten(t.input()))
        setRslt |= getAllInputTargets(flatten(t.requires()))
    return setRslt

class BaseTask(lg.Task):
    logger = logger

    # Mostly copied from the original luigi
    def __repr__(self):
        params = self.get_params()
        param_values = self.get_param_values(params, [], self.param_kwargs)

        repr_parts = []
        param_objs = dict(params)
        for param_name, param_value in param_values:
            if param_objs[param_name].significant:
                if hasattr(param_objs[param_name], 'serializeShort'):
                    thisRepr = param_objs[param_name].serializeShort(param_value)
                else:
                    thisRepr = param_objs[param_name].serialize(param_value)
                repr_parts.append('{}={}'.format(param_name, thisRepr))

        return '{}({})'.format(self.get_task_family(), ', '.join(repr_parts))

    # The default input if there's a parameter called "src"
    def requires(self):
        if hasattr(self, 'src'):
            return self.src
        else:
            return []

    # The default output if there's a parameter called "out"
    def output(self):
        if hasattr(self, 'out'):
            return Target(self.out)
        else:
            return []

    def complete(self):
        """
        Return `True` if all output files exist and their modification time is newer than
        the modification time of any input file. Otherwise, return `False`.
        """
        aInputs = list(getAllInputTargets([self]))
        aOutputs = flatten(self.output())

        if not all((output.exists() for output in aOutputs)):
            return False

        aMtimesOutput = [output.mtime() for output in aOutputs if hasattr(output, 'mtime')]
        if len(aMtimesOutput) == 0:
            return True

        aMtimesInput = [obj.mtime() for obj in aInputs if hasattr(obj, 'mtime')]
        if len(aMtimesInput) == 0:
            return True

        if max(aMtimesInput) > min(aMtimesOutput):
            return False

        return True

class Task(BaseTask):
    pass

class EmitVcTask(Task):
    """Writes one SMT-LIB script. An unchanged script keeps its old mtime.

    The text is significant: a discharge task built on a changed script must
    not be served from luigi's instance cache.
    """
    out = PathParameter()
    text = TextParameter()

    def complete(self):
        t = self.output()
        return t.exists() and t.readText() == self.text

    def run(self):
        self.output().writeText(self.text)

class DischargeTask(Task):
    """Runs the solver on a script and records a VcResult as JSON."""
    src = TaskParameter()
    out = PathParameter()
    taskId = lg.Parameter()
    solver = lg.Parameter(significant=False)
    timeout = lg.FloatParameter(significant=False)

    def complete(self):
        # luigi asks before it looks at the script task
        if not all(t.complete() for t in flatten(self.requires())):
            return False
        if not super().complete():
            return False
        try:
            obj = self.output().readJson()
        except ValueError:
            return False
        return obj.get('solver') == self.solver and obj.get('timeout') == self.timeout

    def solve(self):
        pathSmt = self.input().path
        t0 = time.time()
        try:
            rc, stdout, stderr = (cmdfmt(self.solver) < pathSmt).run(retcode=None, timeout=self.timeout)
        except ProcessTimedOut:
            return VcResult(self.taskId, TIMEOUT, time.time() - t0)
        except CommandNotFound as e:
            return VcResult(self.taskId, UNKNOWN, time.time() - t0, stderr="Command not found: {}".format(e))
        tSpent = time.time() - t0
        status = parseStatus(stdout)
        if status == 'unsat':
            return VcResult(self.taskId, VALID, tSpent, steps=parseSteps(stdout))
        if status == 'sat':
            return VcResult(self.taskId, INVALID, tSpent, model=parseCounterModel(stdout), steps=parseSteps(stdout))
        return VcResult(self.taskId, UNKNOWN, tSpent, steps=parseSteps(stdout), stderr=(stderr or stdout).strip())

    def run(self):
        rslt = self.solve()
        rslt.solver = self.solver
        rslt.timeout = self.timeout
        self.output().writeJson(rslt.toJson())

@Task.event_handler(lg.Event.START)
def logTaskStart(task):
    logger.debug("{}{}Start {}{}".format(Fore.CYAN, Style.BRIGHT, task, Style.RESET_ALL))

@Task.event_handler(lg.Event.PROCESSING_TIME)
def logTaskDone(task, t):
    logger.info("{}{}Done {} in {:.1f}s{}".format(Fore.GREEN, Style.BRIGHT, task, t, Style.RESET_ALL))
