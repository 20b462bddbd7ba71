"""Reports: one dict per command, rendered as a table or JSON.

All values are exact cyclotomic literals (canonical coefficient-vector
strings); reports are deterministic except for the timing fields.
"""

import json
import time


class Report:
    def __init__(self, command, scenario=None):
        self.command = command
        self.scenario = scenario
        self.checks = []
        self.data = {}
        self.attachments = {}  # JSON-only payloads (e.g. full matrices)
        self.started = time.time()

    def attach(self, key, value):
        self.attachments[key] = value

    def add_check(self, name, ok, **info):
        entry = {"name": name, "ok": bool(ok)}
        entry.update(info)
        self.checks.append(entry)
        return ok

    @property
    def ok(self):
        return all(c["ok"] for c in self.checks) if self.checks else True

    def to_dict(self):
        out = {
            "command": self.command,
            "scenario": self.scenario,
            "ok": self.ok,
            "checks": self.checks,
            "data": self.data,
            "seconds": round(time.time() - self.started, 3),
        }
        out.update(self.attachments)
        return out

    def write_json(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True, default=str)
            fh.write("\n")

    def render(self):
        lines = []
        head = "== %s" % self.command
        if self.scenario:
            head += " [%s]" % self.scenario
        lines.append(head)
        for key, val in self.data.items():
            lines.append("   %s: %s" % (key, _fmt(val)))
        for c in self.checks:
            extra = {k: v for k, v in c.items() if k not in ("name", "ok")}
            suffix = ("  " + _fmt(extra)) if extra else ""
            lines.append("   [%s] %s%s" % ("pass" if c["ok"] else "FAIL", c["name"], suffix))
        lines.append("   => %s" % ("ok" if self.ok else "FAILED"))
        return "\n".join(lines)


def _fmt(val):
    if isinstance(val, dict):
        return "{" + ", ".join("%s=%s" % (k, _fmt(v)) for k, v in val.items()) + "}"
    if isinstance(val, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in val) + "]"
    return str(val)


def render_table(rows, headers):
    "Plain fixed-width table."
    cols = [headers] + [[str(x) for x in row] for row in rows]
    widths = [max(len(r[i]) for r in cols) for i in range(len(headers))]
    out = []
    for r, row in enumerate(cols):
        out.append("  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip())
        if r == 0:
            out.append("  ".join("-" * w for w in widths))
    return "\n".join(out)
