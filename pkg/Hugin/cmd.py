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
import shlex
from contextlib import contextmanager
from plumbum import local

DEFAULT_SMT_CMD = 'z3 -in -smt2'
DEFAULT_SMT_TIMEOUT = 60.0
DEFAULT_JOBS = 1
DEFAULT_CARD_BOUND = 4

# Change environment within a context
@contextmanager
def withEnv(**kwargs):
    envOld = {key: os.environ[key] for key in kwargs if key in os.environ}
    os.environ.update(kwargs)
    try:
        with local.env(**kwargs):
            yield
    finally:
        for key, val in kwargs.items():
            if key in envOld:
                os.environ[key] = envOld[key]
            else:
                del os.environ[key]

# Wrapper of os.getenv just for convenience
def getenv(*args, **kwargs):
    return os.getenv(*args, **kwargs)

def splitCmd(cmd):
    if isinstance(cmd, str):
        return shlex.split(cmd)
    return list(cmd)

# Format a command line, given as a string or a list, into a plumbum command
def cmdfmt(cmd, *args, **kwargs):
    lst = [s.format(*args, **kwargs) for s in splitCmd(cmd)]
    return local[lst[0]][lst[1:]]

def solverCommand(override=None):
    return override or getenv('SRA_SMT_CMD') or DEFAULT_SMT_CMD

def solverTimeout(override=None):
    if override is not None:
        return float(override)
    return float(getenv('SRA_SMT_TIMEOUT', DEFAULT_SMT_TIMEOUT))

def jobs(override=None):
    if override is not None:
        return int(override)
    return int(getenv('SRA_JOBS', DEFAULT_JOBS))

def cardBound(override=None):
    if override is not None:
        return int(override)
    return int(getenv('SRA_CARD_BOUND', DEFAULT_CARD_BOUND))
