"""spinforge - 工程化自旋库模拟器.

碳-氢双链模型、四脉冲循环平均哈密顿量、正/负/无穷温度热库热化、
单热库量子热机与过程层析。
"""

__version__ = "0.1.0"
