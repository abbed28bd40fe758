"""Command-line interface.

    v2i-testbed run <scenario-name|file> [--transport inproc|udp] [--out log.csv]
                    [--plotdata out.json] [--seed N] [--dump-commands file] [--events]
    v2i-testbed scenarios list
    v2i-testbed codec encode <file> [-o out]
    v2i-testbed codec decode <file> [-o out]
    v2i-testbed serve <scenario-name|file> [--port P] [--ws-port W]
                    [--lockstep] [--force-human] [--out log.csv]
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from ..errors import TestbedError
from ..messages import decode, encode
from .events import extract_events
from .logio import export_csv, export_plotdata
from .runner import run_scenario
from .scenario import builtin_names, load_scenario
from .serve import TelemetryServer
from .transport import DEFAULT_UDP_PORT, make_transport


def _cmd_run(args) -> int:
    cfg = load_scenario(args.scenario)
    if args.transport:
        cfg.transport = args.transport
    transport = make_transport(cfg.transport, cfg.udp_port or DEFAULT_UDP_PORT)
    log = run_scenario(cfg, transport=transport)
    last = log.rows[-1]
    print(f"{cfg.name}: {len(log.rows)} ticks, final d_int={last.d_int:.1f} m, v={last.v_kmh:.1f} km/h")
    if args.events:
        for event in extract_events(log):
            print(f"  t={event.t:6.1f}s  {event.kind:8s} light={event.light} {event.detail or ''}")
    if args.out:
        export_csv(log, args.out)
        print(f"wrote {args.out}")
    if args.plotdata:
        export_plotdata(log, args.plotdata)
        print(f"wrote {args.plotdata}")
    if args.dump_commands:
        Path(args.dump_commands).write_text(json.dumps(log.commands), encoding="utf-8")
        print(f"wrote {args.dump_commands}")
    return 0


def _cmd_scenarios(args) -> int:
    if args.action == "list":
        for name in builtin_names():
            cfg = load_scenario(name)
            print(f"{name:10s} {cfg.application.upper():5s} driver={cfg.driver_script} "
                  f"duration={cfg.duration:.0f}s")
    return 0


def _cmd_codec(args) -> int:
    data = Path(args.file).read_bytes()
    if args.action == "encode":
        # Accept any JSON formatting of a message and emit canonical bytes.
        msg = decode(data)
        out = encode(msg)
    else:
        msg = decode(data)
        out = json.dumps(json.loads(encode(msg)), indent=2).encode("utf-8")
    if args.output:
        Path(args.output).write_bytes(out + b"\n")
    else:
        sys.stdout.buffer.write(out + b"\n")
    return 0


def _cmd_serve(args) -> int:
    cfg = load_scenario(args.scenario)
    if args.force_human:
        cfg = dataclasses.replace(cfg, driver_script="human")
    server = TelemetryServer(cfg, port=args.port, ws_port=args.ws_port, lockstep=args.lockstep)
    print(f"PORT {server.port}", flush=True)
    if server.ws_port is not None:
        print(f"WS_PORT {server.ws_port}", flush=True)
    log = server.run()
    if args.out:
        export_csv(log, args.out)
        print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="v2i-testbed",
        description="Software-in-the-loop connected-intersection testbed",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a scenario and export its log")
    run_p.add_argument("scenario", help="builtin scenario name or JSON file path")
    run_p.add_argument("--transport", choices=("inproc", "udp"))
    run_p.add_argument("--out", help="write the time series as CSV")
    run_p.add_argument("--plotdata", help="write plot-ready JSON with light bands")
    run_p.add_argument("--seed", type=int, default=0, help="reserved for lossy-transport runs")
    run_p.add_argument("--dump-commands", help="write the per-tick acceleration commands as JSON")
    run_p.add_argument("--events", action="store_true", help="print the extracted event sequence")
    run_p.set_defaults(func=_cmd_run)

    sc_p = sub.add_parser("scenarios", help="inspect the builtin scenario library")
    sc_p.add_argument("action", choices=("list",))
    sc_p.set_defaults(func=_cmd_scenarios)

    codec_p = sub.add_parser("codec", help="canonical SPaT/MAP codec")
    codec_p.add_argument("action", choices=("encode", "decode"))
    codec_p.add_argument("file", help="message file (JSON)")
    codec_p.add_argument("-o", "--output")
    codec_p.set_defaults(func=_cmd_codec)

    serve_p = sub.add_parser("serve", help="serve a human-driven scenario to the console")
    serve_p.add_argument("scenario")
    serve_p.add_argument("--port", type=int, default=0, help="TCP telemetry port (0 = ephemeral)")
    serve_p.add_argument("--ws-port", type=int, default=None,
                         help="also serve WebSocket on this port (for the browser console)")
    serve_p.add_argument("--lockstep", action="store_true",
                         help="wait for one control message per frame (deterministic replay)")
    serve_p.add_argument("--force-human", action="store_true",
                         help="run the scenario with console control even if it has a script")
    serve_p.add_argument("--out", help="write the completed run as CSV")
    serve_p.set_defaults(func=_cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TestbedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
