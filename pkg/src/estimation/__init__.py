"""
测量流程：单行估计、汇总和不确定度
"""
