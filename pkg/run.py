"""
主入口文件

    python run.py reproduce --table 1
    python run.py estimate src/dataset/data/table2.session --mode table
"""
import sys
from dotenv import load_dotenv

load_dotenv()


def main():
    """主函数"""
    from src.cli import run

    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
