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

"""PEG grammar of the modelling language and its side files.

Every rule is a plain function, arpeggio style. Rules that must be
recognisable in the parse tree are listed in RULES; everything else gets
flattened by the tree walker in frontend.py.
"""

import threading

from arpeggio import ParserPython, Optional, ZeroOrMore, EOF
from arpeggio import RegExMatch as _

KEYWORDS = ('class', 'enum', 'var', 'input', 'event', 'timer', 'param', 'set', 'ground', 'from',
        'transition', 'scheduler', 'phases', 'initial', 'final', 'trans', 'when', 'constraints',
        'forall', 'exists', 'in', 'if', 'then', 'else', 'true', 'false', 'null', 'inactive',
        'old', 'assume', 'assert', 'self', 'phase', 'All', 'Set', 'Int', 'Bool', 'Event')

def comment():
    return _(r'//.*')

# Lexical

def ident():
    return _(r'(?!(?:{})\b)[A-Za-z_][A-Za-z0-9_]*'.format('|'.join(KEYWORDS)))

def intLit():
    return _(r'\d+')

def trueLit():
    return _(r'true\b')

def falseLit():
    return _(r'false\b')

def nullLit():
    return _(r'null\b')

def inactiveLit():
    return _(r'inactive\b')

def selfExpr():
    return _(r'self\b')

def phaseExpr():
    return _(r'phase\b')

def quantKw():
    return _(r'(?:forall|exists)\b')

def iffOp():
    return _(r'<==>')

def impOp():
    return _(r'==>')

def orOp():
    return _(r'\|\|')

def andOp():
    return _(r'&&')

def cmpOp():
    # longest first; `<` must not eat the start of `<==>`
    return _(r'==(?!>)|!=|!!|<=(?!=>)|>=|<(?!==>)|>|in\b')

def addOp():
    return _(r'\+|-(?!>)')

def mulOp():
    return _(r'\*')

def unaryOp():
    return _(r'!(?![!=])|-(?!>)')

# Expressions, lowest precedence first

def expr():
    return [quantExpr, iteExpr, iffExpr]

def quantExpr():
    return quantKw, ident, 'in', addExpr, ':', expr

def iteExpr():
    return 'if', expr, 'then', expr, 'else', expr

def iffExpr():
    return impExpr, ZeroOrMore(iffOp, impExpr)

def impExpr():
    return orExpr, Optional(impOp, impExpr)

def orExpr():
    return andExpr, ZeroOrMore(orOp, andExpr)

def andExpr():
    return cmpExpr, ZeroOrMore(andOp, cmpExpr)

def cmpExpr():
    return addExpr, Optional(cmpOp, addExpr)

def addExpr():
    return mulExpr, ZeroOrMore(addOp, mulExpr)

def mulExpr():
    return unaryExpr, ZeroOrMore(mulOp, unaryExpr)

def unaryExpr():
    return [(unaryOp, unaryExpr), postfixExpr]

def postfixExpr():
    return primary, ZeroOrMore('.', ident)

def primary():
    return [intLit, trueLit, falseLit, nullLit, inactiveLit, oldExpr, cardExpr, parenExpr,
            allExpr, selfExpr, phaseExpr, ident]

def oldExpr():
    return 'old', '(', expr, ')'

def cardExpr():
    return '|', expr, '|'

def parenExpr():
    return '(', expr, ')'

def allExpr():
    return 'All', Optional('<', ident, '>')

# Statements

def lhs():
    return ident, Optional('.', ident)

def havocRhs():
    return '*'

def block():
    return '{', ZeroOrMore(stmt), '}'

def stmt():
    return [ifStmt, quantAssign, assumeStmt, assertStmt, assignStmt]

def assignStmt():
    return lhs, ':=', [havocRhs, expr], ';'

def bareAssign():
    return lhs, ':=', [havocRhs, expr]

def branch():
    return [block, quantAssign, bareAssign]

def ifStmt():
    return 'if', expr, 'then', branch, Optional('else', branch), Optional(';')

def quantAssign():
    return 'forall', ident, 'in', addExpr, '{', lhs, ':=', expr, ';', '}'

def assumeStmt():
    return 'assume', expr, ';'

def assertStmt():
    return 'assert', expr, ';'

# Declarations

def setType():
    return 'Set', '<', ident, '>'

def typeName():
    return [setType, _(r'Int\b'), _(r'Bool\b'), ident]

def enumDecl():
    return 'enum', ident, '{', ident, ZeroOrMore(',', ident), Optional(','), '}'

def varDecl():
    return 'var', ident, ':', typeName, Optional('=', expr), Optional(';')

def inputDecl():
    return 'input', ident, ':', typeName, Optional(';')

def eventDecl():
    return 'event', ident, Optional(':', 'Event'), Optional(';')

def timerDecl():
    return 'timer', ident, Optional(';')

def paramDecl():
    return 'param', ident, ':', typeName, Optional(';')

def setDecl():
    return 'set', ident, ':', setType, Optional(';')

def nullMark():
    return '?'

def groundDecl():
    return 'ground', ident, ':', ident, Optional(nullMark), 'from', ident, Optional(';')

def transitionDecl():
    return 'transition', ident, '=', '(', ident, ',', expr, ',', ident, ',', block, ',', ident, ')', Optional(';')

def classDecl():
    return 'class', ident, '{', ZeroOrMore([varDecl, inputDecl, eventDecl, timerDecl, paramDecl,
        setDecl, groundDecl, transitionDecl]), '}'

def phasesDecl():
    return 'phases', ident, ZeroOrMore(',', ident), ';'

def initialDecl():
    return 'initial', ident, ';'

def finalDecl():
    return 'final', ident, ';'

def schedTrans():
    return 'trans', ident, '->', ident, 'when', expr, ';'

def schedulerDecl():
    return 'scheduler', '{', phasesDecl, initialDecl, finalDecl, ZeroOrMore(schedTrans), '}'

def label():
    return ident, ':'

def labeled():
    return Optional(label), expr, ';'

def constraintsDecl():
    return 'constraints', '{', ZeroOrMore(labeled), '}'

def modelFile():
    return ZeroOrMore([enumDecl, classDecl, schedulerDecl, constraintsDecl]), EOF

# Side files

def invFile():
    return ZeroOrMore(labeled), EOF

def gpItem():
    return ident, Optional(ident), ':', expr, ';'

def gpFile():
    return ZeroOrMore(gpItem), EOF

def cfgInt():
    return _(r'-?\d+')

def cfgSet():
    return '{', Optional(ident, ZeroOrMore(',', ident)), '}'

def cfgInst():
    return ident, ident, ZeroOrMore(',', ident), ';'

def cfgAssign():
    return ident, '.', ident, '=', [cfgSet, cfgInt, trueLit, falseLit, nullLit, ident], ';'

def cfgFile():
    return ZeroOrMore([cfgAssign, cfgInst]), EOF

RULES = {f.__name__ for f in (ident, intLit, trueLit, falseLit, nullLit, inactiveLit, selfExpr, phaseExpr,
    quantKw, iffOp, impOp, orOp, andOp, cmpOp, addOp, mulOp, unaryOp,
    expr, quantExpr, iteExpr, iffExpr, impExpr, orExpr, andExpr, cmpExpr, addExpr, mulExpr, unaryExpr,
    postfixExpr, oldExpr, cardExpr, parenExpr, allExpr,
    lhs, havocRhs, block, assignStmt, bareAssign, ifStmt, quantAssign, assumeStmt, assertStmt,
    setType, typeName, enumDecl, varDecl, inputDecl, eventDecl, timerDecl, paramDecl, setDecl, nullMark,
    groundDecl, transitionDecl, classDecl, phasesDecl, initialDecl, finalDecl, schedTrans, schedulerDecl,
    label, labeled, constraintsDecl, gpItem, cfgInt, cfgSet, cfgInst, cfgAssign)}

_lock = threading.Lock()
_parsers = {}

def getParser(root):
    """One cached parser per root rule."""
    with _lock:
        if root.__name__ not in _parsers:
            _parsers[root.__name__] = ParserPython(root, comment, autokwd=True, reduce_tree=False)
        return _parsers[root.__name__]
