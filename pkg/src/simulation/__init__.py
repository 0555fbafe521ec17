"""
正向仿真（测试基准）
"""
