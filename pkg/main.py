"""
TipTrait Main Entry Point

主入口：python main.py <subcommand> ...（等价于 tiptrait 命令）
"""
from src.cli import app

if __name__ == "__main__":
    app()
