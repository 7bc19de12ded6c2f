"""
Command handlers, one per CLI command
"""

from .assure import cmd_assure
from .calibrate import cmd_calibrate
from .check import cmd_check
from .simulate import cmd_simulate

HANDLERS = {
    'check': cmd_check,
    'simulate': cmd_simulate,
    'assure': cmd_assure,
    'calibrate': cmd_calibrate,
}

__all__ = ['HANDLERS', 'cmd_assure', 'cmd_calibrate', 'cmd_check', 'cmd_simulate']
