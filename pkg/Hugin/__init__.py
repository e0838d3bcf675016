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

# Load dotenv before everything
from dotenv import load_dotenv as _load_dotenv, find_dotenv as _find_dotenv
_load_dotenv(_find_dotenv(usecwd=True), override=True)

from . import logging
from .logging import logger

from . import diagnostics
from .diagnostics import Diagnostic, HuginError, FrontendError, SimulationError, SchedulerError, ContractError, EncodingError, GroundingError, OracleError

from . import expr, model
from .model import Model, Configuration, GlobalState

from . import frontend
from .frontend import parseModel, parseConfiguration, parseInvariant, parseLabeled, parseGprime, loadModel, loadConfiguration, loadInvariant, loadLabeled, loadGprime
from .checker import checkModel
from .pretty import printModel, printExpr

from . import simulator
from .simulator import InputProvider, OrderPolicy, evaluate

from . import contractgen
from .contractgen import allContracts, execContract, initContract, tickContract, transformEffect

from . import vcgen
from .vcgen import VerificationTask, VcResult, buildChecks, buildLocalContractTasks

from . import grounding
from .grounding import plan, groundFormula, groundStatements, equivalenceLemmas

from . import cmd
from .cmd import withEnv, cmdfmt, getenv

from . import target
from .target import Target

from . import task
from .task import BaseTask, Task, EmitVcTask, DischargeTask

from . import envcheck
from .envcheck import EnvCheck, SolverCheck

from . import run
from .run import run, discharge

from . import report
from .report import report, Report
