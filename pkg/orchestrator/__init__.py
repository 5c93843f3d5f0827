# orchestrator package