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

from pathlib import Path

import luigi as lg
from luigi.task import flatten

class PathParameter(lg.PathParameter):
    """PathParameter with a short form for displaying the task.

    Paths inside the current directory are shown relative to it.
    """

    def serializeShort(self, x):
        pathForShow = Path(x)
        if pathForShow.is_absolute():
            if pathForShow.is_relative_to(Path.cwd()):
                pathForShow = pathForShow.relative_to(Path.cwd())
        return str(pathForShow)

class TextParameter(lg.Parameter):
    """A whole document, such as an SMT-LIB script. Shown by size only."""

    def serializeShort(self, x):
        return '<{} chars>'.format(len(x))

class TaskParameter(lg.TaskParameter):
    """A task instance, pulled in as a dependency."""

    def _warn_on_wrong_param_type(self, param_name, param_value):
        return

    def serialize(self, x):
        return self.serializeShort(x)

    def serializeShort(self, x):
        aRepr = []
        for out in flatten(x.output()):
            if hasattr(out, 'pathRel'):
                aRepr.append(out.pathRel)
            else:
                aRepr.append(repr(out))
        return ';'.join(sorted(aRepr))
