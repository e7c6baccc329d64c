from .episode import run_episode
from .llm import (EndpointConfig, RemoteLLMPlanner, RemoteMemoryProbe,
                  chat_complete, extract_json, parse_memory_reply,
                  parse_planner_reply)
from .memory import (WINDOW_STEPS, MemoryOutputs, MemoryState, ShortTermState,
                     init_memory, memory_update, summarize_memory)
from .observation import NoiseConfig, Observation, keyed_uniform, perceive
from .policies import GreedyHeuristic, OraclePlanner, RandomAgent

__all__ = [
    "EndpointConfig", "GreedyHeuristic", "MemoryOutputs", "MemoryState",
    "NoiseConfig", "Observation", "OraclePlanner", "RandomAgent",
    "RemoteLLMPlanner", "RemoteMemoryProbe", "ShortTermState", "WINDOW_STEPS",
    "chat_complete", "extract_json", "init_memory", "keyed_uniform",
    "memory_update", "parse_memory_reply", "parse_planner_reply", "perceive",
    "run_episode", "summarize_memory",
]
