"""Interned signature: unary predicates, binary predicates and function symbols."""

from __future__ import annotations

RESERVED = frozenset({"Top", "Bottom"})


class SymbolError(ValueError):
    pass


class _Namespace:
    __slots__ = ("names", "ids")

    def __init__(self) -> None:
        self.names: list[str] = []
        self.ids: dict[str, int] = {}

    def intern(self, name: str) -> int:
        sid = self.ids.get(name)
        if sid is None:
            sid = len(self.names)
            self.names.append(name)
            self.ids[name] = sid
        return sid

    def __len__(self) -> int:
        return len(self.names)


class SymbolTable:
    """Append-only symbol table.

    Identifiers are dense integers handed out in first-use order; that order
    doubles as the precedence tie-break, so a later symbol ranks higher than
    an earlier one of the same sort.
    """

    def __init__(self) -> None:
        self._unary = _Namespace()
        self._binary = _Namespace()
        self._functions = _Namespace()

    # -- interning -----------------------------------------------------

    def unary(self, name: str) -> int:
        self._check_user_name(name)
        if name in self._binary.ids:
            raise SymbolError(f"{name!r} is a role, not a concept")
        return self._unary.intern(name)

    def binary(self, name: str) -> int:
        self._check_user_name(name)
        if name in self._unary.ids:
            raise SymbolError(f"{name!r} is a concept, not a role")
        return self._binary.intern(name)

    def function(self, name: str) -> int:
        self._check_user_name(name)
        return self._functions.intern(name)

    def fresh_function(self, hint: str) -> int:
        return self._functions.intern(self._fresh_name(hint, self._functions))

    def fresh_binary(self, hint: str) -> int:
        return self._binary.intern(self._fresh_name(hint, self._binary))

    @staticmethod
    def _fresh_name(hint: str, space: _Namespace) -> str:
        # '.' never appears in a parsed identifier, so fresh names cannot clash
        # with user symbols.
        name, k = hint, 1
        while name in space.ids:
            k += 1
            name = f"{hint}.{k}"
        return name

    @staticmethod
    def _check_user_name(name: str) -> None:
        if name in RESERVED:
            raise SymbolError(f"{name!r} is reserved")

    # -- lookup --------------------------------------------------------

    def unary_name(self, sid: int) -> str:
        return self._unary.names[sid]

    def binary_name(self, sid: int) -> str:
        return self._binary.names[sid]

    def function_name(self, sid: int) -> str:
        return self._functions.names[sid]

    def find_unary(self, name: str) -> int | None:
        return self._unary.ids.get(name)

    def find_binary(self, name: str) -> int | None:
        return self._binary.ids.get(name)

    def find_function(self, name: str) -> int | None:
        return self._functions.ids.get(name)

    @property
    def unary_predicates(self) -> tuple[str, ...]:
        return tuple(self._unary.names)

    @property
    def binary_predicates(self) -> tuple[str, ...]:
        return tuple(self._binary.names)

    @property
    def function_symbols(self) -> tuple[str, ...]:
        return tuple(self._functions.names)

    def __repr__(self) -> str:
        return (f"SymbolTable(unary={len(self._unary)}, binary={len(self._binary)}, "
                f"functions={len(self._functions)})")
