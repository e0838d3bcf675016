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

"""Command line entry point: `hugin <subcommand> ...`."""

import argparse
import json
import sys
from pathlib import Path

from . import cmd
from .diagnostics import HuginError, FrontendError, SimulationError, OracleError
from .frontend import loadModel, loadConfiguration, loadLabeled, loadGprime
from .checker import checkModel
from .pretty import printModel, printExpr
from .contractgen import allContracts
from .simulator import MAX_STEPS, InputProvider, OrderPolicy, run as simulate, writeTrace
from .vcgen import buildChecks, buildLocalContractTasks
from .grounding import plan, groundStatements, defaultSpecs, equivalenceLemmas
from .report import report, writeReport, EXIT_OK, EXIT_VIOLATION, EXIT_ERROR
from .expr import mkAnd
from .logging import logger, setVerbosity
from .run import discharge, dischargeTasks, run as runTasks

DEFAULT_OUT = 'hugin-out'

def _emit(args, obj, text):
    if args.json:
        print(json.dumps(obj, indent=2, sort_keys=True))
    elif text:
        print(text)

def _dirOut(args, sub=None):
    d = Path(args.out or DEFAULT_OUT)
    if sub:
        d = d / sub
    d.mkdir(parents=True, exist_ok=True)
    return d

def _conj(aLabeled):
    return mkAnd(*[c.expr for c in aLabeled])

def _discharge(args, aTask, dirOut, labels=()):
    rslts = discharge(aTask, dirOut, cmd.solverCommand(args.solver), cmd.solverTimeout(args.timeout), cmd.jobs(args.jobs))
    rpt = report(rslts, aTask, labels)
    writeReport(rpt, dirOut / 'report.json')
    _emit(args, rpt.toJson(), rpt.toText())
    return rpt.exitCode

# Subcommands

def doCheck(args):
    model = loadModel(args.model, check=False)
    aWarn = checkModel(model)
    _emit(args, {'model': str(args.model), 'classes': model.classNames, 'warnings': [str(w) for w in aWarn]},
        "{}: OK ({} classes, {} warnings)".format(args.model, len(model.classes), len(aWarn)))
    return EXIT_OK

def _writeSimTrace(args, model, cfg, trace):
    if args.out:
        pathOut = Path(args.out)
        pathOut.parent.mkdir(parents=True, exist_ok=True)
        with open(pathOut, 'w', encoding='utf-8') as fpw:
            writeTrace(model, cfg, trace, fpw)
    else:
        writeTrace(model, cfg, trace, sys.stdout)

def doSimulate(args):
    model = loadModel(args.model)
    cfg = loadConfiguration(args.config, model)
    if args.inputs:
        with open(args.inputs, 'r', encoding='utf-8') as fp:
            inputs = InputProvider.fromJson(json.load(fp))
    else:
        inputs = InputProvider.random(args.seed)
    order = OrderPolicy.parse(args.order) if args.order else OrderPolicy.seeded(args.seed)
    monitors = [(c.label, c.expr) for c in loadLabeled(args.monitor, model)] if args.monitor else []
    try:
        rslt = simulate(model, cfg, order, inputs, args.cycles, monitors, args.max_steps)
    except SimulationError as e:
        # Deadlocks and livelocks still show how far the run got
        if e.trace:
            _writeSimTrace(args, model, cfg, e.trace)
        raise
    _writeSimTrace(args, model, cfg, rslt.trace)
    if not rslt.passed:
        logger.error("Monitor {} violated".format(rslt.violation))
        return EXIT_VIOLATION
    return EXIT_OK

def doContracts(args):
    model = loadModel(args.model)
    aCon = allContracts(model)
    aLine = []
    for con in aCon:
        aLine.append("{} {}{}:".format(con.kind, con.cls, '' if con.phase is None else '/' + con.phase))
        if con.disjuncts:
            aLine += ["  [{}] {}".format(label, printExpr(f)) for label, f in con.disjuncts]
        else:
            aLine.append("  {}".format(printExpr(con.formula)))
    text = '\n'.join(aLine)
    if args.out:
        (_dirOut(args) / 'contracts.txt').write_text(text + '\n', encoding='utf-8')
    obj = [{'kind': c.kind, 'class': c.cls, 'phase': c.phase, 'formula': printExpr(c.formula)} for c in aCon]
    _emit(args, obj, text)
    return EXIT_OK

def doGround(args):
    model = loadModel(args.model)
    p = plan(model)
    grounded = groundStatements(model, p)
    dirOut = _dirOut(args)
    pathModel = dirOut / '{}.grounded.sra'.format(Path(args.model).stem)
    pathModel.write_text(printModel(grounded), encoding='utf-8')
    logger.info("Grounding plan: {}".format(p))
    aInv = loadLabeled(args.invariant, model) if args.invariant else []
    aProp = loadLabeled(args.property, model) if args.property else []
    aTask = equivalenceLemmas(model, p, defaultSpecs(model, aInv, aProp), cmd.cardBound(args.card_bound))
    dirLemma = _dirOut(args, 'lemmas')
    if args.discharge:
        return _discharge(args, aTask, dirLemma)
    aEmit = [t.requires() for t in dischargeTasks(aTask, dirLemma, '', 0)]
    if aEmit:
        runTasks(aEmit, workers=cmd.jobs(args.jobs))
    _emit(args, {'model': str(pathModel), 'plan': repr(p), 'lemmas': [t.id for t in aTask]},
        "{}\n{} lemma tasks in {}".format(pathModel, len(aTask), dirLemma))
    return EXIT_OK

def doVerifyLocal(args):
    model = loadModel(args.model)
    aTask = buildLocalContractTasks(model, cmd.cardBound(args.card_bound))
    return _discharge(args, aTask, _dirOut(args, 'local'))

def doVerifyGlobal(args):
    if args.config not in (None, 'none'):
        raise HuginError("verify-global checks every configuration at once; pass --config none")
    model = loadModel(args.model)
    aInv = loadLabeled(args.invariant, model)
    aProp = loadLabeled(args.property, model)
    gprime = loadGprime(args.gprime, model) if args.gprime else None
    aTask = buildChecks(model, _conj(aInv), _conj(aProp), gprime, cmd.cardBound(args.card_bound), args.property_phase)
    return _discharge(args, aTask, _dirOut(args, 'global'), [c.label for c in aInv])

def doOracle(args):
    from . import oracles
    model = loadModel(args.model)
    aHarness = ['contracts', 'effects', 'reach', 'grounding'] if args.harness == 'all' else [args.harness]
    aReport = []
    for h in aHarness:
        if h == 'contracts':
            aReport.append(oracles.contractVsSimulator(model, args.samples, args.seed))
        elif h == 'effects':
            aReport.append(oracles.effectMapOracle(model, args.random_effects, args.pre_states, args.seed))
        elif h == 'reach':
            if not (args.invariant and args.property):
                raise HuginError("The reach harness needs --invariant and --property")
            inv = _conj(loadLabeled(args.invariant, model))
            prop = _conj(loadLabeled(args.property, model))
            aReport.append(oracles.theoremAgreement(model, inv, prop, args.configs, args.cycles, args.seed))
        elif h == 'grounding':
            p = plan(model)
            if p:
                aReport.append(oracles.groundingEquivalence(model, p, args.configs, args.cycles))
    obj = [r.toJson() for r in aReport]
    if args.out:
        (_dirOut(args) / 'oracles.json').write_text(json.dumps(obj, indent=2, sort_keys=True) + '\n', encoding='utf-8')
    text = '\n'.join("{}: {} ({} samples, {:.1%} sound, {:.1%} precise, {} skipped)".format(
        r.name, 'pass' if r.passed else 'FAIL', r.samples, r.soundRate, r.precisionRate, r.skipped) for r in aReport)
    _emit(args, obj, text)
    return EXIT_OK if all(r.passed for r in aReport) else EXIT_VIOLATION

# Parser

def _solverFlags(s):
    s.add_argument('--solver', help='Solver command line reading SMT-LIB on stdin (env SRA_SMT_CMD)')
    s.add_argument('--timeout', type=float, help='Seconds per task (env SRA_SMT_TIMEOUT, default 60)')
    s.add_argument('--jobs', '-j', type=int, help='Parallel solver processes (env SRA_JOBS)')

def _boundFlag(s):
    s.add_argument('--card-bound', type=int, help='Largest cardinality expanded into witnesses (env SRA_CARD_BOUND)')

def getParser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-v', '--verbose', action='store_true')
    common.add_argument('--quiet', action='store_true')
    common.add_argument('--json', action='store_true', help='Machine-readable output')
    common.add_argument('--out', help='Output directory; the trace file for simulate')
    parser = argparse.ArgumentParser(prog='hugin', description='Configurable scheduler-restricted asynchronous systems: check, simulate and verify.')
    subparsers = parser.add_subparsers(dest='command', required=True)

    s = subparsers.add_parser('check', parents=[common], help='Parse and type-check a model')
    s.add_argument('model')
    s.set_defaults(main=doCheck)

    s = subparsers.add_parser('simulate', parents=[common], help='Run a model on one concrete configuration (required)')
    s.add_argument('model')
    s.add_argument('--config', required=True, help='Configuration file; simulation always needs one')
    s.add_argument('--cycles', type=int, default=1)
    s.add_argument('--seed', type=int, default=0)
    s.add_argument('--order', help='seed:N, fixed:a,b,c or fixed:Phase=a,b;Phase2=c')
    s.add_argument('--inputs', help='JSON input script {"cycles": [...]} or {"seed": N}')
    s.add_argument('--monitor', help='Labelled formulas checked at every final phase state')
    s.add_argument('--max-steps', type=int, default=MAX_STEPS)
    s.set_defaults(main=doSimulate)

    s = subparsers.add_parser('contracts', parents=[common], help='Print the generated local contracts')
    s.add_argument('model')
    s.set_defaults(main=doContracts)

    s = subparsers.add_parser('ground', parents=[common], help='Ground unit-cardinality sets and emit equivalence lemmas')
    s.add_argument('model')
    s.add_argument('--invariant')
    s.add_argument('--property')
    s.add_argument('--discharge', action='store_true', help='Also run the solver on the lemmas')
    _solverFlags(s)
    _boundFlag(s)
    s.set_defaults(main=doGround)

    s = subparsers.add_parser('verify-local', parents=[common], help='Check generated contracts against the statement encoding')
    s.add_argument('model')
    _solverFlags(s)
    _boundFlag(s)
    s.set_defaults(main=doVerifyLocal)

    s = subparsers.add_parser('verify-global', parents=[common], help='Discharge the global entailment checks for every configuration')
    s.add_argument('model')
    s.add_argument('--config', help="Only 'none': the checks quantify over all configurations satisfying the constraints")
    s.add_argument('--invariant', required=True)
    s.add_argument('--property', required=True)
    s.add_argument('--gprime', help="Per-phase local conditions g' (default !executed)")
    s.add_argument('--property-phase', help='Phase at which the property must hold (default: final phase)')
    _solverFlags(s)
    _boundFlag(s)
    s.set_defaults(main=doVerifyGlobal)

    s = subparsers.add_parser('oracle', parents=[common], help='Differential harnesses against the simulator')
    s.add_argument('model')
    s.add_argument('--harness', choices=['contracts', 'effects', 'reach', 'grounding', 'all'], default='all')
    s.add_argument('--samples', type=int, default=1000)
    s.add_argument('--random-effects', type=int, default=200)
    s.add_argument('--pre-states', type=int, default=100)
    s.add_argument('--configs', type=int, default=20)
    s.add_argument('--cycles', type=int, default=3)
    s.add_argument('--seed', type=int, default=0)
    s.add_argument('--invariant')
    s.add_argument('--property')
    s.set_defaults(main=doOracle)
    return parser

def main(argv=None):
    parser = getParser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_OK
    setVerbosity(args.verbose, args.quiet)
    try:
        return args.main(args)
    except FrontendError as e:
        for d in e.diagnostics:
            logger.error(str(d))
        if args.json:
            print(json.dumps({'diagnostics': [d.toJson() for d in e.diagnostics]}, indent=2))
        return EXIT_ERROR
    except OracleError as e:
        logger.error("{} (seed {})".format(e, e.seed))
        return EXIT_VIOLATION
    except (HuginError, RuntimeError, OSError, ValueError) as e:
        logger.error(str(e))
        return EXIT_ERROR

if __name__ == '__main__':
    sys.exit(main())
