name='config'
