import json
import logging
import sqlite3
from pathlib import Path
from typing import List, Optional, Sequence, Union

logger = logging.getLogger(__name__)


class ResultStore:
    """sqlite cache of polymorphism member codes, keyed by constraint signature and arity."""

    def __init__(self, db_path: Union[str, Path] = 'pol_cache.db'):
        self.db_path = str(db_path)
        self.conn = sqlite3.connect(self.db_path)
        self.create_tables()

    def create_tables(self):
        """Create the necessary tables if they don't exist."""
        try:
            cursor = self.conn.cursor()
            cursor.execute('''
                CREATE TABLE IF NOT EXISTS pol_results (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    signature TEXT NOT NULL,
                    arity INTEGER NOT NULL,
                    members TEXT NOT NULL,
                    created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP,
                    UNIQUE (signature, arity)
                )
            ''')
            self.conn.commit()
        except Exception as e:
            logger.error(f"Error creating result tables: {str(e)}")
            raise

    def get_members(self, signature: str, arity: int) -> Optional[List[int]]:
        """Cached member codes, or None on a miss."""
        try:
            cursor = self.conn.cursor()
            cursor.execute(
                'SELECT members FROM pol_results WHERE signature = ? AND arity = ?',
                (signature, arity),
            )
            row = cursor.fetchone()
        except Exception as e:
            logger.error(f"Error reading cached result {signature}/{arity}: {str(e)}")
            raise
        if row is None:
            return None
        logger.debug(f"Cache hit for {signature} at arity {arity}")
        return json.loads(row[0])

    def put_members(self, signature: str, arity: int, codes: Sequence[int]):
        try:
            cursor = self.conn.cursor()
            cursor.execute('''
                INSERT OR REPLACE INTO pol_results (signature, arity, members)
                VALUES (?, ?, ?)
            ''', (signature, arity, json.dumps([int(c) for c in codes])))
            self.conn.commit()
        except Exception as e:
            logger.error(f"Error caching result {signature}/{arity}: {str(e)}")
            self.conn.rollback()
            raise

    def count(self) -> int:
        cursor = self.conn.cursor()
        cursor.execute('SELECT COUNT(*) FROM pol_results')
        return cursor.fetchone()[0]

    def close(self):
        """Close the database connection."""
        try:
            self.conn.close()
        except Exception as e:
            logger.error(f"Error closing database connection: {str(e)}")

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
