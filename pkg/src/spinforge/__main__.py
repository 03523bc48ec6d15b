"""spinforge CLI 入口点.

通过 `python -m spinforge` 或 `spinforge` 命令运行.
"""

from spinforge.cli_main import app

if __name__ == "__main__":
    app()
