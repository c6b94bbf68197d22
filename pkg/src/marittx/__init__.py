"""marittx: hybrid tabletop-exercise platform for maritime cyber crises.

A compartmental cyberattack-propagation simulator over a networked
infrastructure drives a phased, event-cycled exercise; a session orchestrator
exposes the exercise over a CLI and HTTP API; an analytics module evaluates
exercises with descriptive statistics and linear regression.
"""

__version__ = "0.1.0"
