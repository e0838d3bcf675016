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

import sys

from plumbum import local

from .cmd import splitCmd
from .logging import logger

EXIT_ENV = 2

class EnvCheck(object):
    """Verifies once per process that the external commands it names exist."""
    _instance = None
    cmd = None

    def __new__(cls, *args, **kwargs):
        if cls._instance is None:
            cls._instance = object.__new__(cls)
            cls._instance.setChecked = set()
        return cls._instance

    def __init__(self, cmd=None):
        cmd = cmd or self.cmd
        if cmd is None:
            return
        aCmd = splitCmd(cmd)
        if len(aCmd) == 0:
            self.fail("Empty command")
        if aCmd[0] in self.setChecked:
            return
        if not aCmd[0] in local:
            self.failCmd(aCmd[0])
        self.setChecked.add(aCmd[0])

    def failCmd(self, cmd):
        self.fail("Command '{}' not found".format(cmd))

    def fail(self, msg):
        logger.error("Environment check {} failed: {}".format(self.__class__.__name__, msg))
        sys.exit(EXIT_ENV)

class SolverCheck(EnvCheck):
    _instance = None
