from .context import GlobalContext, Symbol
from .errors import KernelError, Span
from .reduce import Reducer, convertible, whnf
from .rule import Binding, Head, MVar, Rule, validate_rule
from .term import (
    KIND,
    TYPE,
    Comb,
    Const,
    SharingPolicy,
    Term,
    Var,
    app,
    arrow,
    convert_policy,
    lam,
    map_constants,
    pi,
)
from .typecheck import (
    CheckTask,
    KernelOptions,
    Origin,
    TypeChecker,
    TypeCheckError,
    TypeErrorKind,
    check_declaration,
    check_rule,
    run_task,
)

__all__ = [
    "GlobalContext",
    "Symbol",
    "KernelError",
    "Span",
    "Reducer",
    "convertible",
    "whnf",
    "Binding",
    "Head",
    "MVar",
    "Rule",
    "validate_rule",
    "KIND",
    "TYPE",
    "Comb",
    "Const",
    "SharingPolicy",
    "Term",
    "Var",
    "app",
    "arrow",
    "convert_policy",
    "lam",
    "map_constants",
    "pi",
    "CheckTask",
    "KernelOptions",
    "Origin",
    "TypeChecker",
    "TypeCheckError",
    "TypeErrorKind",
    "check_declaration",
    "check_rule",
    "run_task",
]
