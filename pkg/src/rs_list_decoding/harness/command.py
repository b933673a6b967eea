import argparse
from typing import Any, Callable, Dict

JSON_TYPES: Dict[str, Callable[[str], Any]] = {
    "integer": int,
    "number": float,
    "string": str,
}


class Command:
    """A CLI subcommand: the function it runs and a JSON-schema style declaration of its flags.

    The declaration has ``name``, ``description`` and ``parameters`` with ``properties``
    (``type``, ``description`` and optionally ``default`` or ``enum`` per flag) and ``required``.
    Commands with ``streams=True`` receive an ``on_trial`` callback for per-trial output.
    """

    def __init__(self, func: Callable[..., Any], declaration: dict, streams: bool = False):
        self.func = func
        self.declaration = declaration
        self.streams = streams

    def invoke(self, **kwargs) -> Any:
        return self.func(**kwargs)

    @property
    def name(self) -> str:
        return self.declaration.get("name", self.func.__name__.replace("_", "-"))

    @property
    def properties(self) -> Dict[str, dict]:
        return self.declaration.get("parameters", {}).get("properties", {})

    def add_parser(self, subparsers, parents=()) -> argparse.ArgumentParser:
        parser = subparsers.add_parser(
            self.name, help=self.declaration.get("description"), parents=list(parents)
        )
        required = set(self.declaration.get("parameters", {}).get("required", []))
        for flag, schema in self.properties.items():
            kwargs: Dict[str, Any] = {"dest": flag, "help": schema.get("description")}
            if schema.get("type") == "boolean":
                kwargs["action"] = argparse.BooleanOptionalAction
                kwargs["default"] = schema.get("default", False)
            else:
                kwargs["type"] = JSON_TYPES[schema.get("type", "string")]
                if "enum" in schema:
                    kwargs["choices"] = schema["enum"]
                if flag in required:
                    kwargs["required"] = True
                else:
                    kwargs["default"] = schema.get("default")
            parser.add_argument(f"--{flag.replace('_', '-')}", **kwargs)
        parser.set_defaults(command=self)
        return parser

    def arguments(self, namespace: argparse.Namespace) -> Dict[str, Any]:
        return {flag: getattr(namespace, flag) for flag in self.properties}

    def __str__(self) -> str:
        return f'<Command "{self.name}" invoke->{self.func.__name__}>'

    def __repr__(self) -> str:
        return f"{self.name} Command"


__all__ = ["Command", "JSON_TYPES"]
