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

import logging as _logging
import warnings

from logzero import setup_logger
from colorama import Fore, Style

logger = setup_logger('Hugin')

# luigi warns about parameters it did not consume
from luigi.parameter import UnconsumedParameterWarning
warnings.simplefilter("ignore", UnconsumedParameterWarning)

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    import luigi

def setVerbosity(verbose=False, quiet=False):
    if verbose:
        logger.setLevel(_logging.DEBUG)
    elif quiet:
        logger.setLevel(_logging.WARNING)
    else:
        logger.setLevel(_logging.INFO)

def paint(msg, color):
    return "{}{}{}{}".format(color, Style.BRIGHT, msg, Style.RESET_ALL)

def good(msg):
    return paint(msg, Fore.GREEN)

def bad(msg):
    return paint(msg, Fore.RED)

def meh(msg):
    return paint(msg, Fore.YELLOW)
