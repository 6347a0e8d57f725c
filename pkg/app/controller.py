"""Command controller that wires parsed CLI configuration to the analysis core.

Handles loading and validating inputs, dispatching subcommands, rendering
reports and mapping failures to exit codes.
"""

import sys
from typing import Optional, TextIO

from app.core.analysis import (
    GapHypothesisError,
    WitnessSpaceTooLargeError,
    sweep_k,
    transform_instance,
    verify_theorem,
    witness_report,
)
from app.core.circuit import Circuit, CircuitError, CircuitParseError, load_circuit, save_circuit
from app.core.constants import EXIT_FAILURE, EXIT_OK, EXIT_USAGE
from app.core.exact import ExactFormatError, format_exact
from app.core.gadgets import GadgetError
from app.core.logging import LogEntry, Logger, get_logger
from app.core.model import CliConfig, Command, OutputFormat
from app.core.protocol import NonBooleanControlError
from app.core.rewind import TransformParamsError, build_protocol
from app.core.simulator import SimulationError, defer_measurements
from app.core.validation import validate_cli_config
from app.ui import render_json, render_prob, render_sweep, render_transform, render_verify

_USAGE_ERRORS = (
    CircuitError,
    ExactFormatError,
    GadgetError,
    GapHypothesisError,
    NonBooleanControlError,
    TransformParamsError,
    WitnessSpaceTooLargeError,
)


class CommandController:
    """Runs one subcommand end to end.

    Responsibilities:
    - Validate flags before any simulation
    - Load the verifier circuit
    - Dispatch to the subcommand handler and print its report
    - Turn exceptions into messages on stderr and exit codes
    """

    def __init__(
        self,
        config: CliConfig,
        out: Optional[TextIO] = None,
        err: Optional[TextIO] = None,
        logger: Optional[Logger] = None,
    ) -> None:
        """Initialize the controller.

        Args:
            config: Parsed command-line configuration
            out: Report stream (stdout if None)
            err: Error stream (stderr if None)
            logger: Logger instance (uses global if None)
        """
        self._config = config
        self._out = out or sys.stdout
        self._err = err or sys.stderr
        self._logger = logger or get_logger()

        if config.log_path is not None:
            self._logger.file_logger.configure(config.log_path)
            self._logger.file_logger.clear()

    def run(self) -> int:
        """Execute the configured subcommand.

        With ``verbose`` set, every log entry recorded during the run is echoed
        to the error stream.

        Returns:
            EXIT_OK, EXIT_USAGE or EXIT_FAILURE
        """
        if not self._config.verbose:
            return self._run()
        buffer = self._logger.buffer
        buffer.add_listener(self._echo)
        try:
            return self._run()
        finally:
            buffer.remove_listener(self._echo)

    def _echo(self, entry: LogEntry) -> None:
        self._err.write(f"{entry.level.name} {entry.format()}\n")

    def _run(self) -> int:
        config = self._config
        self._logger.info("run", command=config.command.value, circuit=config.circuit_path)

        validation = validate_cli_config(config)
        if not validation:
            return self._fail_usage(validation.errors)

        try:
            assert config.circuit_path is not None
            circuit = load_circuit(config.circuit_path)
        except CircuitParseError as e:
            return self._fail_usage([f"{config.circuit_path}: {e}"])
        except OSError as e:
            return self._fail_usage([f"cannot read {config.circuit_path}: {e}"])

        validation = validate_cli_config(config, arity=circuit.witness_arity)
        if not validation:
            return self._fail_usage(validation.errors)

        handlers = {
            Command.PROB: self._cmd_prob,
            Command.TRANSFORM: self._cmd_transform,
            Command.VERIFY: self._cmd_verify,
            Command.SWEEP: self._cmd_sweep,
        }
        try:
            return handlers[config.command](circuit)
        except _USAGE_ERRORS as e:
            self._logger.exception("rejected input", e)
            return self._fail_usage([str(e)])
        except SimulationError as e:
            self._logger.exception("simulation invariant failed", e)
            self._err.write(f"error: {e}\n")
            return EXIT_FAILURE
        finally:
            self._logger.clear_context()

    def _fail_usage(self, errors: list[str]) -> int:
        for error in errors:
            self._logger.error(error)
            self._err.write(f"error: {error}\n")
        return EXIT_USAGE

    def _emit(self, text: str, doc: dict) -> None:
        if self._config.output_format is OutputFormat.JSON:
            self._out.write(render_json(doc))
        else:
            self._out.write(text)

    # Subcommands

    def _cmd_prob(self, circuit: Circuit) -> int:
        report = witness_report(circuit, self._config.witness or "")
        self._logger.info("probability", w=report.w or "-", p=format_exact(report.probability))
        self._emit(render_prob(report), report.to_dict())
        return EXIT_OK

    def _cmd_transform(self, circuit: Circuit) -> int:
        config = self._config
        assert config.k is not None and config.c is not None
        tp = build_protocol(circuit, config.witness or "", config.k, config.c, l_mode=config.l_mode)
        report = transform_instance(tp, config.semantics, config.l_mode)

        if config.emit_path is not None:
            deferred = defer_measurements(tp.protocol)
            header = (
                f"deferred-measurement verifier: w={tp.params.w or '-'} k={tp.params.k} "
                f"l={tp.params.l} c={format_exact(tp.params.c)}\naccept iff {report.formula}"
            )
            try:
                save_circuit(deferred, config.emit_path, header=header)
            except OSError as e:
                return self._fail_usage([f"cannot write {config.emit_path}: {e}"])
            self._logger.info("emitted", path=config.emit_path, width=deferred.width, gates=len(deferred.gates))

        self._emit(render_transform(report), report.to_dict())
        return EXIT_OK if report.row.equal else EXIT_FAILURE

    def _cmd_verify(self, circuit: Circuit) -> int:
        config = self._config
        assert config.c is not None and config.s is not None
        report = verify_theorem(
            circuit,
            config.m,
            config.c,
            config.s,
            l_mode=config.l_mode,
            semantics=config.semantics,
            workers=config.workers,
            logger=self._logger,
        )
        self._emit(render_verify(report), report.to_dict())
        return EXIT_OK if report.passed else EXIT_FAILURE

    def _cmd_sweep(self, circuit: Circuit) -> int:
        config = self._config
        assert config.c is not None
        report = sweep_k(
            circuit,
            config.witness or "",
            config.c,
            l_mode=config.l_mode,
            semantics=config.semantics,
            workers=config.workers,
            logger=self._logger,
        )
        self._emit(render_sweep(report), report.to_dict())
        return EXIT_OK if report.all_equal else EXIT_FAILURE
