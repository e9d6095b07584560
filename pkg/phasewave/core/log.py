"""phasewave 日志器"""

import logging

logger = logging.getLogger("phasewave")
