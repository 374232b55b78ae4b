import logging
import logging.handlers
import sys
import zipfile
from datetime import datetime, timezone
from pathlib import Path
from typing import List, Optional

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(message)s"
BACKUP_DAYS = 14


def rotated_name(file_name: str) -> str:
    """scarf.log.2024-05-01 -> scarf-2024-05-01.log"""
    p = Path(file_name)
    return str(p.with_name(p.name.replace(".log.", "-") + ".log"))


def archive_old_logs(log_dir: str, name: str) -> List[Path]:
    """
    Move <name>-YYYY-MM-DD.log files of earlier months into archive/<name>-YYYY-MM.zip.
    Returns the archives written to.
    """
    log_path = Path(log_dir)
    archive_dir = log_path / "archive"
    archive_dir.mkdir(parents=True, exist_ok=True)
    this_month = datetime.now(timezone.utc).strftime("%Y-%m")

    touched: List[Path] = []
    for log_file in sorted(log_path.glob(f"{name}-*.log")):
        day = log_file.stem[len(name) + 1:]
        try:
            month = datetime.strptime(day, "%Y-%m-%d").strftime("%Y-%m")
        except ValueError:
            continue
        if month >= this_month:
            continue
        archive_path = archive_dir / f"{name}-{month}.zip"
        with zipfile.ZipFile(archive_path, "a", compression=zipfile.ZIP_DEFLATED) as zf:
            zf.write(log_file, arcname=log_file.name)
        log_file.unlink(missing_ok=True)
        if archive_path not in touched:
            touched.append(archive_path)
    return touched


def setup_logging(
    log_dir: str, level: int | str = logging.INFO, name: str = "scarf", logger_name: Optional[str] = None
) -> logging.Logger:
    """
    Daily-rotated file log under log_dir plus a stderr console; stdout stays free
    for table output. Handlers go on logger_name (default: name) and replace any
    left by an earlier call.
    """
    log_path = Path(log_dir)
    log_path.mkdir(parents=True, exist_ok=True)

    logger = logging.getLogger(logger_name or name)
    logger.setLevel(level)
    for handler in list(logger.handlers):
        handler.close()
        logger.removeHandler(handler)

    formatter = logging.Formatter(LOG_FORMAT)
    file_handler = logging.handlers.TimedRotatingFileHandler(
        log_path / f"{name}.log",
        when="midnight",
        backupCount=BACKUP_DAYS,
        utc=True,
        encoding="utf-8",
    )
    file_handler.suffix = "%Y-%m-%d"
    file_handler.namer = rotated_name
    console_handler = logging.StreamHandler(sys.stderr)
    for handler in (file_handler, console_handler):
        handler.setFormatter(formatter)
        logger.addHandler(handler)

    archived = archive_old_logs(log_dir, name)
    if archived:
        logger.debug("Archived old logs into %s", ", ".join(str(p) for p in archived))
    return logger
