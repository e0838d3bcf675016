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

from collections import namedtuple

from .logging import logger

# Diagnostic codes
SYNTAX = 'E001'
NO_CLASSES = 'E002'
DUPLICATE = 'E003'
UNKNOWN_NAME = 'E004'
TYPE_ERROR = 'E005'
LOCATION_ASSIGNED = 'E010'
INPUT_ASSIGNED = 'E011'
EVENT_NOT_TRUE = 'E012'
GUARD_SHAPE = 'E013'
QUANT_ASSIGN = 'E014'
SCHED_GUARD = 'E015'
CONSTRAINT_MUTABLE = 'E016'
QUANT_RANGE = 'E017'
IMMUTABLE_ASSIGNED = 'E018'
OLD_IN_SOURCE = 'E019'
LOCATION_DECL = 'E020'
BAD_LOCATION = 'E021'
SCHEDULER = 'E022'
EXECUTED_ASSIGNED = 'E023'
MIXED_WRITE = 'E024'
CONFIG = 'E030'
GPRIME_POST = 'E031'
NO_INIT = 'W001'
GAMMA_FALSE = 'W002'

class Span(namedtuple('Span', ['file', 'start', 'end', 'line', 'col'])):
    __slots__ = ()

    def __str__(self):
        return '{}:{}:{}'.format(self.file or '<input>', self.line, self.col)

class Diagnostic(namedtuple('Diagnostic', ['severity', 'code', 'message', 'span'])):
    __slots__ = ()

    @property
    def isError(self):
        return self.severity == 'error'

    def __str__(self):
        return '{}: {} {}: {}'.format(self.span, self.severity, self.code, self.message)

    def toJson(self):
        sp = self.span
        return {'severity': self.severity, 'code': self.code, 'message': self.message,
            'file': sp.file if sp else None, 'line': sp.line if sp else None, 'col': sp.col if sp else None}

class HuginError(Exception):
    pass

class FrontendError(HuginError):
    def __init__(self, aDiag):
        self.diagnostics = list(aDiag)
        super().__init__('\n'.join(str(d) for d in self.diagnostics))

    @property
    def codes(self):
        return [d.code for d in self.diagnostics]

class SimulationError(HuginError):
    def __init__(self, msg, trace=None):
        super().__init__(msg)
        self.trace = trace

class SchedulerError(SimulationError):
    pass

class ContractError(HuginError):
    pass

class EncodingError(HuginError):
    pass

class GroundingError(HuginError):
    pass

class OracleError(HuginError):
    def __init__(self, msg, seed=None, artifact=None):
        super().__init__(msg)
        self.seed = seed
        self.artifact = artifact

class Sink(object):
    """Collects diagnostics for one source file."""

    def __init__(self, filename=None):
        self.filename = filename
        self.aDiag = []

    def error(self, code, msg, span):
        self.aDiag.append(Diagnostic('error', code, msg, span))

    def warning(self, code, msg, span):
        self.aDiag.append(Diagnostic('warning', code, msg, span))

    @property
    def hasErrors(self):
        return any(d.isError for d in self.aDiag)

    def raiseIfErrors(self):
        for d in self.aDiag:
            if not d.isError:
                logger.warning(str(d))
        if self.hasErrors:
            raise FrontendError(self.aDiag)
