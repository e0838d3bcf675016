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
from pathlib import Path
from contextlib import contextmanager
from shutil import rmtree

import pytest
from plumbum import local

dirCorpus = Path(__file__).resolve().parent.parent / 'corpus'

def corpus(name):
    return str(dirCorpus / name)

def corpusText(name):
    return (dirCorpus / name).read_text(encoding='utf-8')

# Solver runs need a real z3 on PATH
needsZ3 = pytest.mark.skipif("z3" not in local, reason="z3 not found")

@contextmanager
def TestFieldForFile():
    dirCurrent = Path.cwd()
    p = "temp_dir_test_output"
    Path(p).mkdir(parents=True, exist_ok=True)
    os.chdir(p)
    try:
        yield p
    finally:
        os.chdir(dirCurrent)
        rmtree(p)
