import logging
import sys

from config.settings import get_settings
from cli.command_router import main

settings = get_settings()

logging.basicConfig(
    level=getattr(logging, settings.VOS_LOG_LEVEL.upper(), logging.WARNING),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    datefmt="%Y-%m-%d %H:%M:%S",
    stream=sys.stderr,
)
logger = logging.getLogger(__name__)

if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
