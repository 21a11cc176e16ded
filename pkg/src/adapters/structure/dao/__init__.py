from .expression import AbstractSetExpressionCodec, LarkSetExpressionCodec
