"""
会话文件、内置数据集和报告
"""
