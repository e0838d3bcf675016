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
import json
from contextlib import contextmanager
from pathlib import Path

import luigi as lg
from luigi.local_target import LocalFileSystem

class LocalOverwriteFileSystem(LocalFileSystem):
    def rename_dont_move(self, path, dest):
        Path(dest).unlink(missing_ok=True)
        self.move(path, dest, raise_if_exists=False)

class Target(lg.LocalTarget):
    """A task artifact: a verification script, a solver result or a report."""
    fs = LocalOverwriteFileSystem()

    def __init__(self, path, **kwargs):
        super().__init__(str(path), **kwargs)
        pathRel = Path(self.path)
        if pathRel.is_absolute():
            if pathRel.is_relative_to(Path.cwd()):
                pathRel = pathRel.relative_to(Path.cwd())
            else:
                pathRel = pathRel.relative_to(pathRel.root)
        self.pathRel = str(pathRel)

    def __repr__(self):
        return '{}({})'.format(self.__class__.__name__, self.path)

    def mtime(self):
        return os.path.getmtime(self.path)

    @contextmanager
    def fpWrite(self):
        with self.open('w') as fpw:
            yield fpw

    def readText(self):
        with self.open('r') as fp:
            return fp.read()

    def writeText(self, text):
        with self.fpWrite() as fpw:
            fpw.write(text)

    def readJson(self):
        return json.loads(self.readText())

    def writeJson(self, obj):
        self.writeText(json.dumps(obj, indent=2, sort_keys=True) + '\n')
