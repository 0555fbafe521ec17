"""
光学计算：薄透镜代数和传感器模型
"""
