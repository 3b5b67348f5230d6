from .ast import (
    EXPR_TYPES,
    ONE,
    TEST_TYPES,
    ZERO,
    Act,
    And,
    Expr,
    GuardedChoice,
    GuardedLoop,
    Not,
    One,
    Or,
    Prim,
    ProbChoice,
    ProbLoop,
    Return,
    Seq,
    Test,
    TestExpr,
    Zero,
    ast_size,
    expr_names,
    is_gkat,
    prim_names,
)
from .atoms import Alphabet, Atom, bool_equiv, entails, enumerate_atoms
from .parser import Parser, parse_expr, parse_program, parse_test
from .printer import print_expr, print_header, print_program, print_rat, print_test
