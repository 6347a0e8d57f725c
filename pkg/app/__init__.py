"""qcma-rewind - exact simulation of the rewinding perfect-completeness transform."""

__version__ = "0.1.0"
