from .main import main
from .report import load_run, write_report
from .server import SessionServer, scene_summary
from .traces import read_trace, replay_trace, trace_scene, trace_task, write_trace

__all__ = ["SessionServer", "load_run", "main", "read_trace", "replay_trace",
           "scene_summary", "trace_scene", "trace_task", "write_report",
           "write_trace"]
